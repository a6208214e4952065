#include "mdb/plan/logical.hpp"

#include <stdexcept>

#include "mdb/core/value.hpp"

namespace mdb::plan {

namespace {

using query::Condition;
using query::RelationalPattern;
using query::Term;

void add_term_var(const Term& t, std::set<std::string>& out) {
    if (t.is_var) out.insert(t.var);
}

query::ConditionPtr clone_condition(const Condition& c) {
    auto out = std::make_unique<Condition>();
    out->kind = c.kind;
    out->op = c.op;
    out->left_var = c.left_var;
    out->right_var = c.right_var;
    out->left_key = c.left_key;
    out->right_key = c.right_key;
    out->constant = c.constant;
    if (c.left) out->left = clone_condition(*c.left);
    if (c.right) out->right = clone_condition(*c.right);
    return out;
}

MatchNode flatten_block(const query::BasicPattern& block) {
    MatchNode node;
    for (const auto& a : block.objects) node.atoms.push_back({Atom::Kind::Object, {a.object}, nullptr});
    for (const auto& a : block.labels)
        node.atoms.push_back({Atom::Kind::Label, {a.object, Term::object(a.label)}, nullptr});
    for (const auto& a : block.props)
        node.atoms.push_back({Atom::Kind::Prop, {a.object, Term::object(a.key), a.value}, nullptr});
    for (const auto& a : block.edges)
        node.atoms.push_back({Atom::Kind::Edge, {a.source, a.type, a.target, a.edge}, nullptr});
    for (const auto& p : block.paths)
        node.paths.push_back({Atom::Kind::Path, {p.source, p.target}, &p});
    return node;
}

// Collects the basic blocks of an And subtree into one match node. Optional
// nodes cannot appear under a conjunction here (the surface language nests
// OPTIONAL at block boundaries only).
void flatten_and(const RelationalPattern& p, MatchNode& into) {
    switch (p.kind) {
        case RelationalPattern::Kind::Basic: {
            MatchNode part = flatten_block(p.basic);
            for (auto& a : part.atoms) into.atoms.push_back(std::move(a));
            for (auto& a : part.paths) into.paths.push_back(std::move(a));
            return;
        }
        case RelationalPattern::Kind::And:
            flatten_and(*p.left, into);
            flatten_and(*p.right, into);
            return;
        case RelationalPattern::Kind::Opt:
            throw std::invalid_argument(
                "optional pattern nested under a conjunction is not supported by the planner");
    }
}

std::unique_ptr<PatternNode> build_pattern(const RelationalPattern& p) {
    auto node = std::make_unique<PatternNode>();
    if (p.kind == RelationalPattern::Kind::Opt) {
        node->kind = PatternNode::Kind::Optional;
        node->left = build_pattern(*p.left);
        node->right = build_pattern(*p.right);
        return node;
    }
    node->kind = PatternNode::Kind::Match;
    flatten_and(p, node->match);
    return node;
}

}  // namespace

std::set<std::string> Atom::vars() const {
    std::set<std::string> out;
    for (const auto& c : cols) add_term_var(c, out);
    if (path && path->path_var) out.insert(*path->path_var);
    return out;
}

std::set<std::string> MatchNode::vars() const {
    std::set<std::string> out;
    for (const auto& a : atoms)
        for (const auto& c : a.cols) add_term_var(c, out);
    for (const auto& p : paths) {
        auto v = p.vars();
        out.insert(v.begin(), v.end());
    }
    for (const auto& [var, value] : assignments) out.insert(var);
    return out;
}

std::set<std::string> PatternNode::vars() const {
    if (kind == Kind::Match) return match.vars();
    std::set<std::string> out = left->vars();
    auto r = right->vars();
    out.insert(r.begin(), r.end());
    return out;
}

LogicalPlan build_logical(const query::FormalQuery& q) {
    LogicalPlan plan;
    plan.pattern = build_pattern(*q.pattern);
    if (q.condition->kind != Condition::Kind::True) plan.where = clone_condition(*q.condition);
    plan.select = q.select;
    plan.order = q.order;
    plan.limit = q.limit;
    return plan;
}

namespace {

MatchNode& root_match(PatternNode& node) {
    if (node.kind == PatternNode::Kind::Match) return node.match;
    return root_match(*node.left);
}

void substitute_var(PatternNode& node, const std::string& var, ObjectId value) {
    auto apply = [&](MatchNode& m) {
        for (auto& a : m.atoms)
            for (auto& c : a.cols)
                if (c.is_var && c.var == var) c = Term::object(value);
        for (auto& p : m.paths)
            for (auto& c : p.cols)
                if (c.is_var && c.var == var) c = Term::object(value);
    };
    if (node.kind == PatternNode::Kind::Match) {
        apply(node.match);
        return;
    }
    substitute_var(*node.left, var, value);
    substitute_var(*node.right, var, value);
}

// Prunes conjuncts rewritten to True; returns null when the whole tree is.
query::ConditionPtr prune_condition(query::ConditionPtr c) {
    if (!c) return nullptr;
    if (c->kind == Condition::Kind::And) {
        c->left = prune_condition(std::move(c->left));
        c->right = prune_condition(std::move(c->right));
        if (!c->left) return std::move(c->right);
        if (!c->right) return std::move(c->left);
        return c;
    }
    if (c->kind == Condition::Kind::True) return nullptr;
    return c;
}

}  // namespace

void simplify(LogicalPlan& plan, const ValueDict* dict) {
    if (!plan.where) return;
    MatchNode& root = root_match(*plan.pattern);
    std::set<std::string> certain = root.vars();
    std::set<std::string> assigned;

    // Visit the top-level AND chain; other shapes are left untouched.
    std::vector<Condition*> conjuncts;
    std::vector<Condition*> stack = {plan.where.get()};
    while (!stack.empty()) {
        Condition* c = stack.back();
        stack.pop_back();
        if (c->kind == Condition::Kind::And) {
            stack.push_back(c->left.get());
            stack.push_back(c->right.get());
        } else {
            conjuncts.push_back(c);
        }
    }

    for (Condition* c : conjuncts) {
        if (c->kind == Condition::Kind::VarEqConst) {
            if (!certain.count(c->left_var) || assigned.count(c->left_var)) continue;
            substitute_var(*plan.pattern, c->left_var, c->constant);
            root.assignments.emplace_back(c->left_var, c->constant);
            assigned.insert(c->left_var);
            c->kind = Condition::Kind::True;
        } else if (c->kind == Condition::Kind::PropCmpConst && c->op == query::Cmp::Eq) {
            if (!certain.count(c->left_var)) continue;
            // The key needs an id; long keys require the dictionary.
            std::optional<ObjectId> key;
            if (c->left_key.size() <= kInlineStringCap)
                key = ObjectId::inline_string(c->left_key);
            else if (dict)
                key = encode_string_readonly(c->left_key, *dict);
            if (!key) continue;
            root.atoms.push_back({Atom::Kind::Prop,
                                  {Term::variable(c->left_var), Term::object(*key),
                                   Term::object(c->constant)},
                                  nullptr});
            c->kind = Condition::Kind::True;
        }
    }
    plan.where = prune_condition(std::move(plan.where));
}

void simplify(LogicalPlan& plan) { simplify(plan, nullptr); }

std::string term_text(const Term& t, const Fmt& fmt) {
    return t.is_var ? t.var : fmt(t.constant);
}

std::string rpq_text(const query::Rpq& r, const Fmt& fmt) {
    using K = query::Rpq::Kind;
    switch (r.kind) {
        case K::Epsilon: return "<eps>";
        case K::Type: return fmt(r.type);
        case K::Concat: return "(" + rpq_text(*r.left, fmt) + "/" + rpq_text(*r.right, fmt) + ")";
        case K::Alternation:
            return "(" + rpq_text(*r.left, fmt) + "|" + rpq_text(*r.right, fmt) + ")";
        case K::Inverse: return "^" + rpq_text(*r.left, fmt);
        case K::Star: return "(" + rpq_text(*r.left, fmt) + ")*";
    }
    return "?";
}

std::string condition_text(const Condition& c, const Fmt& fmt) {
    switch (c.kind) {
        case Condition::Kind::True: return "TRUE";
        case Condition::Kind::VarEqVar: return "(" + c.left_var + " == " + c.right_var + ")";
        case Condition::Kind::VarEqConst:
            return "(" + c.left_var + " == " + fmt(c.constant) + ")";
        case Condition::Kind::PropCmpProp:
            return "(" + c.left_var + "." + c.left_key + " " + cmp_text(c.op) + " " + c.right_var +
                   "." + c.right_key + ")";
        case Condition::Kind::PropCmpConst:
            return "(" + c.left_var + "." + c.left_key + " " + cmp_text(c.op) + " " +
                   fmt(c.constant) + ")";
        case Condition::Kind::Not: return "NOT " + condition_text(*c.left, fmt);
        case Condition::Kind::And:
            return "(" + condition_text(*c.left, fmt) + " AND " + condition_text(*c.right, fmt) +
                   ")";
        case Condition::Kind::Or:
            return "(" + condition_text(*c.left, fmt) + " OR " + condition_text(*c.right, fmt) +
                   ")";
    }
    return "?";
}

std::string atom_text(const Atom& a, const Fmt& fmt) {
    auto col = [&](std::size_t i) { return term_text(a.cols[i], fmt); };
    switch (a.kind) {
        case Atom::Kind::Object: return "Object(" + col(0) + ")";
        case Atom::Kind::Label: return "Label(" + col(0) + ", " + col(1) + ")";
        case Atom::Kind::Prop: return "Prop(" + col(0) + ", " + col(1) + ", " + col(2) + ")";
        case Atom::Kind::Edge:
            return "Edge(" + col(0) + ", " + col(1) + ", " + col(2) + ", " + col(3) + ")";
        case Atom::Kind::Path: {
            std::string s = "Path(" + col(0) + ", " + rpq_text(*a.path->rpq, fmt) + ", " + col(1) +
                            ")";
            if (a.path->path_var) s += " as " + *a.path->path_var;
            return s;
        }
    }
    return "?";
}

namespace {

void pattern_text(const PatternNode& node, const Fmt& fmt, const std::string& indent,
                  std::string& out) {
    if (node.kind == PatternNode::Kind::Optional) {
        out += indent + "OpOptional\n";
        pattern_text(*node.left, fmt, indent + "  ", out);
        pattern_text(*node.right, fmt, indent + "  ", out);
        return;
    }
    out += indent + "OpMatch\n";
    for (const auto& a : node.match.atoms) out += indent + "  " + atom_text(a, fmt) + "\n";
    for (const auto& p : node.match.paths) out += indent + "  " + atom_text(p, fmt) + "\n";
    for (const auto& [var, value] : node.match.assignments)
        out += indent + "  assign " + var + " = " + fmt(value) + "\n";
}

}  // namespace

std::string explain_logical(const LogicalPlan& plan, const Fmt& fmt) {
    std::string out;
    std::string select_list;
    for (const auto& el : plan.select) {
        if (!select_list.empty()) select_list += ", ";
        select_list += el.text();
    }
    out += "OpSelect " + (select_list.empty() ? "*" : select_list);
    if (plan.limit > 0) out += " limit " + std::to_string(plan.limit);
    out += "\n";
    std::string indent = "  ";
    if (!plan.order.empty()) {
        std::string keys;
        for (const auto& k : plan.order) {
            if (!keys.empty()) keys += ", ";
            keys += k.element.text() + (k.descending ? " desc" : " asc");
        }
        out += indent + "OpOrderBy " + keys + "\n";
        indent += "  ";
    }
    if (plan.where) {
        out += indent + "OpWhere " + condition_text(*plan.where, fmt) + "\n";
        indent += "  ";
    }
    pattern_text(*plan.pattern, fmt, indent, out);
    return out;
}

}  // namespace mdb::plan
