#include <string>

#include "mdb/query/parser.hpp"

// Canonical rendering of a parsed query: one line, clauses in the order
// SELECT MATCH WHERE ORDER BY LIMIT, suffix direction form for ORDER BY, and
// minimal parentheses chosen so that re-parsing reproduces the same tree.
namespace mdb::query {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string term_text(const AstTerm& term) {
    switch (term.kind) {
        case AstTerm::Kind::Variable:
        case AstTerm::Kind::Name: return term.text;
        case AstTerm::Kind::String: return quote(term.text);
        case AstTerm::Kind::Integer: return std::to_string(term.number);
        case AstTerm::Kind::Anonymous: return "";
    }
    return "";
}

std::string props_text(const std::vector<AstProperty>& props) {
    std::string out = "{";
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (i) out += ", ";
        out += props[i].key + " : " + term_text(props[i].value);
    }
    out += "}";
    return out;
}

std::string node_text(const AstNode& node) {
    std::string out = "(";
    std::string body = term_text(node.term);
    for (const auto& label : node.labels) {
        if (!body.empty()) body += " ";
        body += ":" + label;
    }
    if (!node.props.empty()) {
        if (!body.empty()) body += " ";
        body += props_text(node.props);
    }
    return out + body + ")";
}

// Precedence levels for rpq rendering: alternation 0, concat 1, inverse 2,
// postfix 3, atoms 4. A child is parenthesized when its level is below what
// its position requires.
int rpq_level(const RpqNode& n) {
    switch (n.kind) {
        case RpqNode::Kind::Alternation: return 0;
        case RpqNode::Kind::Concat: return 1;
        case RpqNode::Kind::Inverse: return 2;
        case RpqNode::Kind::Star:
        case RpqNode::Kind::Plus:
        case RpqNode::Kind::Maybe: return 3;
        case RpqNode::Kind::Type: return 4;
    }
    return 4;
}

std::string rpq_text(const RpqNode& n, int need) {
    std::string out;
    switch (n.kind) {
        case RpqNode::Kind::Type: out = n.type_name; break;
        case RpqNode::Kind::Alternation:
            out = rpq_text(*n.left, 0) + "|" + rpq_text(*n.right, 1);
            break;
        case RpqNode::Kind::Concat:
            out = rpq_text(*n.left, 1) + "/" + rpq_text(*n.right, 2);
            break;
        case RpqNode::Kind::Inverse: out = "^" + rpq_text(*n.left, 2); break;
        case RpqNode::Kind::Star: out = rpq_text(*n.left, 4) + "*"; break;
        case RpqNode::Kind::Plus: out = rpq_text(*n.left, 4) + "+"; break;
        case RpqNode::Kind::Maybe: out = rpq_text(*n.left, 4) + "?"; break;
    }
    if (rpq_level(n) < need) return "(" + out + ")";
    return out;
}

std::string edge_text(const AstEdge& edge) {
    std::string body;
    auto add = [&body](const std::string& piece) {
        if (!body.empty()) body += " ";
        body += piece;
    };
    if (edge.edge_var) add(*edge.edge_var);
    if (edge.type_name) add(*edge.type_name);
    if (edge.type_var) add("TYPE(" + *edge.type_var + ")");
    if (!edge.props.empty()) add(props_text(edge.props));
    return "-[" + body + "]->";
}

std::string path_text(const AstPath& path) {
    std::string body;
    if (path.path_var) body = *path.path_var + " ";
    body += rpq_text(*path.rpq, 0);
    return "=[" + body + "]=>";
}

std::string atom_text(const PatternAtom& atom) {
    switch (atom.kind) {
        case PatternAtom::Kind::Node: return node_text(atom.node);
        case PatternAtom::Kind::Edge:
            return node_text(atom.source) + edge_text(atom.edge) + node_text(atom.target);
        case PatternAtom::Kind::Path:
            return node_text(atom.source) + path_text(atom.path) + node_text(atom.target);
    }
    return "";
}

std::string pattern_text(const MatchPattern& pattern) {
    if (pattern.kind == MatchPattern::Kind::Atoms) {
        std::string out;
        for (std::size_t i = 0; i < pattern.atoms.size(); ++i) {
            if (i) out += ", ";
            out += atom_text(pattern.atoms[i]);
        }
        return out;
    }
    return pattern_text(*pattern.outer) + " OPTIONAL { " + pattern_text(*pattern.inner) + " }";
}

// Condition precedence: OR 0, AND 1, NOT and atoms 2.
int condition_level(const AstCondition& c) {
    switch (c.kind) {
        case AstCondition::Kind::Or: return 0;
        case AstCondition::Kind::And: return 1;
        default: return 2;
    }
}

std::string condition_text(const AstCondition& c, int need) {
    std::string out;
    switch (c.kind) {
        case AstCondition::Kind::VarVsVar:
            out = c.left_var + " " + cmp_text(c.op) + " " + c.right_var;
            break;
        case AstCondition::Kind::VarVsConst:
            out = c.left_var + " " + cmp_text(c.op) + " " + term_text(c.constant);
            break;
        case AstCondition::Kind::PropVsProp:
            out = c.left_var + "." + c.left_key + " " + cmp_text(c.op) + " " + c.right_var + "." +
                  c.right_key;
            break;
        case AstCondition::Kind::PropVsConst:
            out = c.left_var + "." + c.left_key + " " + cmp_text(c.op) + " " +
                  term_text(c.constant);
            break;
        case AstCondition::Kind::Not: out = "NOT (" + condition_text(*c.left, 0) + ")"; break;
        case AstCondition::Kind::And:
            out = condition_text(*c.left, 1) + " AND " + condition_text(*c.right, 2);
            break;
        case AstCondition::Kind::Or:
            out = condition_text(*c.left, 0) + " OR " + condition_text(*c.right, 1);
            break;
    }
    if (condition_level(c) < need) return "(" + out + ")";
    return out;
}

}  // namespace

std::string print_rpq(const RpqNode& node) { return rpq_text(node, 0); }

std::string print_query(const QueryAst& ast) {
    std::string out = "SELECT ";
    if (ast.select_star) {
        out += "*";
    } else {
        for (std::size_t i = 0; i < ast.select.size(); ++i) {
            if (i) out += ", ";
            out += ast.select[i].text();
        }
    }
    out += " MATCH " + pattern_text(ast.match);
    if (ast.where) out += " WHERE " + condition_text(*ast.where, 0);
    if (!ast.order_by.empty()) {
        out += " ORDER BY ";
        for (std::size_t i = 0; i < ast.order_by.size(); ++i) {
            if (i) out += ", ";
            out += ast.order_by[i].element.text();
            if (ast.order_by[i].descending) out += " DESC";
        }
    }
    if (ast.limit) out += " LIMIT " + std::to_string(*ast.limit);
    return out;
}

}  // namespace mdb::query
