#include "mdb/query/parser.hpp"

#include <cctype>
#include <initializer_list>
#include <string>

#include "mdb/core/errors.hpp"
#include "mdb/core/object_id.hpp"

// Recursive-descent parser. There is no separate tokenizer: names, property
// keys and rpq type tokens may contain spaces, so terms are scanned in place
// with context-dependent stop sets, and keywords are matched case-insensitively
// at word boundaries only where a keyword may legally occur.
namespace mdb::query {

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool integer_token(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    std::size_t pos() const { return pos_; }
    void restore(std::size_t p) { pos_ = p; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ == text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // Consumes a multi-character punctuation token like "-[" or "]=>";
    // leading whitespace is skipped, the token itself must be contiguous.
    bool consume(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!consume(c)) fail(std::string("expected ") + what);
    }

    void expect(std::string_view token, const char* what) {
        if (!consume(token)) fail(std::string("expected ") + what);
    }

    [[noreturn]] void fail(const std::string& what) { throw SyntaxError(pos_, what); }
    [[noreturn]] void fail_at(std::size_t where, const std::string& what) {
        throw SyntaxError(where, what);
    }

    // True when the keyword starts at p (case-insensitive, word-bounded on
    // the right; the caller guarantees a word boundary on the left).
    bool keyword_at(std::size_t p, std::string_view kw) const {
        if (p + kw.size() > text_.size()) return false;
        for (std::size_t i = 0; i < kw.size(); ++i)
            if (std::toupper(static_cast<unsigned char>(text_[p + i])) != kw[i]) return false;
        return p + kw.size() == text_.size() || !word_char(text_[p + kw.size()]);
    }

    bool peek_keyword(std::string_view kw) {
        skip_ws();
        return keyword_at(pos_, kw);
    }

    bool keyword(std::string_view kw) {
        skip_ws();
        if (!keyword_at(pos_, kw)) return false;
        pos_ += kw.size();
        return true;
    }

    // Raw scan from the current position until a stop character or a stop
    // keyword at a word start. The result is whitespace-trimmed; internal
    // spaces survive (names and keys may contain them). The scan's first word
    // is always payload, so a name or key may *be* a reserved word — it just
    // cannot contain one later on.
    std::string until(std::string_view stop_chars, std::initializer_list<std::string_view> stop_kws,
                      const char* what) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (stop_chars.find(c) != std::string_view::npos) break;
            bool word_start = pos_ != start && !word_char(text_[pos_ - 1]);
            if (word_start) {
                bool stop = false;
                for (auto kw : stop_kws)
                    if (keyword_at(pos_, kw)) {
                        stop = true;
                        break;
                    }
                if (stop) break;
            }
            ++pos_;
        }
        std::size_t end = pos_;
        while (end > start && std::isspace(static_cast<unsigned char>(text_[end - 1]))) --end;
        std::string out(text_.substr(start, end - start));
        if (out.empty()) fail_at(start, std::string("expected ") + what);
        return out;
    }

    // Contiguous run of word characters from here (after whitespace).
    std::string word() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && word_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    // ?name — letters, digits and underscores after the marker.
    std::string variable() {
        skip_ws();
        std::size_t start = pos_;
        expect('?', "a variable");
        std::string name = "?";
        while (pos_ < text_.size() && word_char(text_[pos_])) name.push_back(text_[pos_++]);
        if (name.size() == 1) fail_at(start, "expected a variable name after '?'");
        return name;
    }

    // "..." with escapes \" \\ \n \t.
    std::string quoted() {
        skip_ws();
        expect('"', "a quoted string");
        std::string out;
        while (true) {
            if (pos_ == text_.size()) fail("unterminated string");
            char c = text_[pos_++];
            if (c == '"') return out;
            if (c == '\\') {
                if (pos_ == text_.size()) fail("unterminated escape");
                char e = text_[pos_++];
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    default: fail_at(pos_ - 2, std::string("unknown escape \\") + e);
                }
            } else {
                out.push_back(c);
            }
        }
    }

    int64_t integer_literal(std::string_view token, std::size_t at) {
        try {
            int64_t v = std::stoll(std::string(token));
            if (v < kInlineIntMin || v > kInlineIntMax)
                fail_at(at, "integer literal outside the representable range");
            return v;
        } catch (const std::out_of_range&) {
            fail_at(at, "integer literal outside the representable range");
        }
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : c_(text) {}

    QueryAst run() {
        QueryAst ast;
        if (!c_.keyword("SELECT")) c_.fail("expected SELECT");
        parse_select(ast);
        if (!c_.keyword("MATCH")) c_.fail("expected MATCH");
        ast.match = parse_pattern_body(/*inside_block=*/false);
        if (c_.keyword("WHERE")) ast.where = parse_or();
        bool saw_order = false, saw_limit = false;
        while (true) {
            if (c_.peek_keyword("ORDER")) {
                if (saw_order) c_.fail("duplicate ORDER BY clause");
                saw_order = true;
                c_.keyword("ORDER");
                if (!c_.keyword("BY")) c_.fail("expected BY after ORDER");
                parse_order_by(ast);
            } else if (c_.peek_keyword("LIMIT")) {
                if (saw_limit) c_.fail("duplicate LIMIT clause");
                saw_limit = true;
                c_.keyword("LIMIT");
                parse_limit(ast);
            } else {
                break;
            }
        }
        if (!c_.at_end()) {
            std::size_t where = c_.pos();
            std::string leading = c_.word();
            if (!leading.empty())
                throw UnknownClauseError(where, "unknown clause \"" + leading + "\"");
            c_.fail("unexpected trailing text");
        }
        return ast;
    }

private:
    // ---- SELECT ------------------------------------------------------------
    void parse_select(QueryAst& ast) {
        if (c_.consume('*')) {
            ast.select_star = true;
            return;
        }
        while (true) {
            ast.select.push_back(parse_selection_element({"MATCH"}, ","));
            if (!c_.consume(',')) break;
        }
        if (ast.select.empty()) c_.fail("expected a selection element");
    }

    // ?v or ?v.key; the key is scanned greedily up to a stop.
    SelectionElement parse_selection_element(std::initializer_list<std::string_view> stop_kws,
                                             std::string_view stop_chars) {
        SelectionElement e;
        e.var = c_.variable();
        if (c_.consume('.')) {
            std::string stops(stop_chars);
            e.key = c_.until(stops, stop_kws, "a property key");
        }
        return e;
    }

    // ---- MATCH -------------------------------------------------------------
    MatchPattern parse_pattern_body(bool inside_block) {
        MatchPattern pattern;  // Kind::Atoms
        bool any = false, optional_seen = false;
        while (true) {
            if (inside_block) {
                if (c_.peek() == '}') break;
            } else if (c_.at_end() || c_.peek_keyword("WHERE") || c_.peek_keyword("ORDER") ||
                       c_.peek_keyword("LIMIT")) {
                break;
            }
            if (c_.keyword("OPTIONAL")) {
                c_.expect('{', "'{' after OPTIONAL");
                auto inner = parse_pattern_body(/*inside_block=*/true);
                c_.expect('}', "'}' closing the OPTIONAL block");
                auto outer = std::make_unique<MatchPattern>(std::move(pattern));
                pattern = MatchPattern{};
                pattern.kind = MatchPattern::Kind::Optional;
                pattern.outer = std::move(outer);
                pattern.inner = std::make_unique<MatchPattern>(std::move(inner));
                optional_seen = true;
            } else {
                if (!inside_block && any && c_.peek() != '(') {
                    std::size_t at = c_.pos();
                    std::string clause = c_.word();
                    if (!clause.empty())
                        throw UnknownClauseError(at, "unknown clause \"" + clause + "\"");
                }
                if (optional_seen)
                    c_.fail("pattern atoms may not follow an OPTIONAL block");
                parse_chain(pattern.atoms);
            }
            any = true;
            c_.consume(',');  // separators between atoms are optional
        }
        if (!any) c_.fail("expected a pattern");
        return pattern;
    }

    // (a)-[...]->(b)-[...]->(c) and friends; one atom per link.
    void parse_chain(std::vector<PatternAtom>& out) {
        AstNode node = parse_node();
        bool linked = false;
        while (true) {
            if (c_.consume("-[")) {
                PatternAtom atom;
                atom.kind = PatternAtom::Kind::Edge;
                atom.edge = parse_edge_interior();
                c_.expect("]->", "]-> closing the edge");
                atom.source = std::move(node);
                atom.target = parse_node();
                node = AstNode{atom.target.term, {}, {}};  // continuation carries the bare term
                out.push_back(std::move(atom));
                linked = true;
            } else if (c_.consume("=[")) {
                PatternAtom atom;
                atom.kind = PatternAtom::Kind::Path;
                atom.path = parse_path_interior();
                c_.expect("]=>", "]=> closing the path");
                atom.source = std::move(node);
                atom.target = parse_node();
                node = AstNode{atom.target.term, {}, {}};
                out.push_back(std::move(atom));
                linked = true;
            } else {
                break;
            }
        }
        if (!linked) {
            PatternAtom atom;
            atom.kind = PatternAtom::Kind::Node;
            atom.node = std::move(node);
            out.push_back(std::move(atom));
        }
    }

    AstNode parse_node() {
        AstNode node;
        c_.expect('(', "'('");
        node.term = parse_node_term();
        while (c_.consume(':')) node.labels.push_back(c_.until(":{)", {}, "a label"));
        if (c_.peek() == '{') node.props = parse_props();
        c_.expect(')', "')'");
        return node;
    }

    AstTerm parse_node_term() {
        char first = c_.peek();
        AstTerm term;
        if (first == ')' || first == ':' || first == '{') {
            term.kind = AstTerm::Kind::Anonymous;
            return term;
        }
        if (first == '?') {
            term.kind = AstTerm::Kind::Variable;
            term.text = c_.variable();
            return term;
        }
        if (first == '"') {
            term.kind = AstTerm::Kind::String;
            term.text = c_.quoted();
            return term;
        }
        std::size_t at = c_.pos();
        std::string token = c_.until(":{)", {}, "a term");
        if (integer_token(token)) {
            term.kind = AstTerm::Kind::Integer;
            term.number = c_.integer_literal(token, at);
        } else {
            term.kind = AstTerm::Kind::Name;
            term.text = std::move(token);
        }
        return term;
    }

    AstEdge parse_edge_interior() {
        AstEdge edge;
        if (c_.peek() == '?') edge.edge_var = c_.variable();
        char next = c_.peek();
        if (next != ']' && next != '{') {
            // TYPE(?t) names the type variable; anything else is a constant.
            std::size_t mark = c_.pos();
            bool type_var = false;
            if (c_.keyword("TYPE")) {
                if (c_.consume('(')) {
                    edge.type_var = c_.variable();
                    c_.expect(')', "')' after the type variable");
                    type_var = true;
                } else {
                    c_.restore(mark);
                }
            }
            if (!type_var) edge.type_name = c_.until("]{", {}, "an edge type");
        }
        if (c_.peek() == '{') edge.props = parse_props();
        return edge;
    }

    AstPath parse_path_interior() {
        AstPath path;
        if (c_.peek() == '?') path.path_var = c_.variable();
        path.rpq = parse_rpq_alternation();
        return path;
    }

    // rpq precedence, loosest first: | then / then ^ then postfix.
    RpqPtr parse_rpq_alternation() {
        RpqPtr left = parse_rpq_concat();
        while (c_.consume('|'))
            left = make_rpq(RpqNode::Kind::Alternation, std::move(left), parse_rpq_concat());
        return left;
    }

    RpqPtr parse_rpq_concat() {
        RpqPtr left = parse_rpq_unary();
        while (c_.consume('/'))
            left = make_rpq(RpqNode::Kind::Concat, std::move(left), parse_rpq_unary());
        return left;
    }

    RpqPtr parse_rpq_unary() {
        if (c_.consume('^')) return make_rpq(RpqNode::Kind::Inverse, parse_rpq_unary());
        return parse_rpq_postfix();
    }

    RpqPtr parse_rpq_postfix() {
        RpqPtr node = parse_rpq_primary();
        while (true) {
            if (c_.consume('*'))
                node = make_rpq(RpqNode::Kind::Star, std::move(node));
            else if (c_.consume('+'))
                node = make_rpq(RpqNode::Kind::Plus, std::move(node));
            else if (c_.consume('?'))
                node = make_rpq(RpqNode::Kind::Maybe, std::move(node));
            else
                break;
        }
        return node;
    }

    RpqPtr parse_rpq_primary() {
        if (c_.consume('(')) {
            RpqPtr inner = parse_rpq_alternation();
            c_.expect(')', "')' in the path expression");
            return inner;
        }
        return make_rpq_type(c_.until("/|^*+?()]", {}, "a path type"));
    }

    std::vector<AstProperty> parse_props() {
        std::vector<AstProperty> props;
        c_.expect('{', "'{'");
        if (c_.consume('}')) return props;
        while (true) {
            AstProperty p;
            p.key = c_.until(":}", {}, "a property key");
            c_.expect(':', "':' after the property key");
            p.value = parse_value_term("',' or '}'");
            props.push_back(std::move(p));
            if (c_.consume(',')) continue;
            c_.expect('}', "'}' closing the properties");
            break;
        }
        return props;
    }

    // Inline property values: quoted string or integer literal only.
    AstTerm parse_value_term(const char* context) {
        AstTerm term;
        if (c_.peek() == '"') {
            term.kind = AstTerm::Kind::String;
            term.text = c_.quoted();
            return term;
        }
        std::size_t at = c_.pos();
        std::string token = c_.until(",}", {}, "a property value");
        if (!integer_token(token))
            c_.fail_at(at, std::string("property values are quoted strings or integers (before ") +
                               context + ")");
        term.kind = AstTerm::Kind::Integer;
        term.number = c_.integer_literal(token, at);
        return term;
    }

    // ---- WHERE -------------------------------------------------------------
    AstConditionPtr parse_or() {
        AstConditionPtr left = parse_and();
        while (c_.keyword("OR")) {
            auto node = std::make_unique<AstCondition>();
            node->kind = AstCondition::Kind::Or;
            node->left = std::move(left);
            node->right = parse_and();
            left = std::move(node);
        }
        return left;
    }

    AstConditionPtr parse_and() {
        AstConditionPtr left = parse_condition_unary();
        while (c_.keyword("AND")) {
            auto node = std::make_unique<AstCondition>();
            node->kind = AstCondition::Kind::And;
            node->left = std::move(left);
            node->right = parse_condition_unary();
            left = std::move(node);
        }
        return left;
    }

    AstConditionPtr parse_condition_unary() {
        if (c_.keyword("NOT")) {
            auto node = std::make_unique<AstCondition>();
            node->kind = AstCondition::Kind::Not;
            node->left = parse_condition_unary();
            return node;
        }
        if (c_.consume('(')) {
            AstConditionPtr inner = parse_or();
            c_.expect(')', "')' closing the condition");
            return inner;
        }
        return parse_comparison();
    }

    AstConditionPtr parse_comparison() {
        auto node = std::make_unique<AstCondition>();
        std::size_t at = c_.pos();
        if (c_.peek() != '?') c_.fail("expected a comparison");
        node->left_var = c_.variable();
        bool left_prop = c_.consume('.');
        if (left_prop)
            node->left_key = c_.until("=!<>)", {"AND", "OR", "NOT", "ORDER", "LIMIT"},
                                      "a property key");
        node->op = parse_cmp();
        char next = c_.peek();
        if (next == '?') {
            node->right_var = c_.variable();
            bool right_prop = c_.consume('.');
            if (right_prop)
                node->right_key = c_.until("=!<>)", {"AND", "OR", "NOT", "ORDER", "LIMIT"},
                                           "a property key");
            if (left_prop != right_prop)
                c_.fail_at(at, "cannot compare a property access with a bare variable");
            node->kind = left_prop ? AstCondition::Kind::PropVsProp : AstCondition::Kind::VarVsVar;
        } else {
            node->constant = parse_condition_constant(at, left_prop);
            node->kind = left_prop ? AstCondition::Kind::PropVsConst
                                   : AstCondition::Kind::VarVsConst;
        }
        if (!left_prop && node->op != Cmp::Eq && node->op != Cmp::Ne)
            c_.fail_at(at, "ordered comparisons require property accesses on both sides");
        return node;
    }

    Cmp parse_cmp() {
        if (c_.consume("==")) return Cmp::Eq;
        if (c_.consume("!=")) return Cmp::Ne;
        if (c_.consume("<=")) return Cmp::Le;
        if (c_.consume(">=")) return Cmp::Ge;
        if (c_.consume('<')) return Cmp::Lt;
        if (c_.consume('>')) return Cmp::Gt;
        c_.fail("expected a comparison operator");
    }

    AstTerm parse_condition_constant(std::size_t at, bool left_prop) {
        AstTerm term;
        if (c_.peek() == '"') {
            term.kind = AstTerm::Kind::String;
            term.text = c_.quoted();
            return term;
        }
        std::size_t start = c_.pos();
        std::string token =
            c_.until(")", {"AND", "OR", "NOT", "ORDER", "LIMIT"}, "a comparison operand");
        if (integer_token(token)) {
            term.kind = AstTerm::Kind::Integer;
            term.number = c_.integer_literal(token, start);
            return term;
        }
        if (left_prop)
            c_.fail_at(at, "property comparisons take quoted strings or integers");
        term.kind = AstTerm::Kind::Name;
        term.text = std::move(token);
        return term;
    }

    // ---- ORDER BY / LIMIT --------------------------------------------------
    void parse_order_by(QueryAst& ast) {
        while (true) {
            AstOrderKey key;
            bool prefix_dir = false;
            if (c_.keyword("ASC")) {
                prefix_dir = true;
            } else if (c_.keyword("DESC")) {
                prefix_dir = true;
                key.descending = true;
            }
            if (prefix_dir && c_.consume('(')) {
                key.element = parse_selection_element({}, ")");
                c_.expect(')', "')' after the order element");
            } else {
                key.element =
                    parse_selection_element({"ASC", "DESC", "LIMIT"}, ",");
                if (!prefix_dir) {
                    if (c_.keyword("ASC")) key.descending = false;
                    else if (c_.keyword("DESC")) key.descending = true;
                }
            }
            ast.order_by.push_back(std::move(key));
            if (!c_.consume(',')) break;
        }
    }

    void parse_limit(QueryAst& ast) {
        c_.skip_ws();
        std::size_t at = c_.pos();
        std::string token = c_.word();
        bool digits = !token.empty();
        for (char ch : token)
            if (!std::isdigit(static_cast<unsigned char>(ch))) digits = false;
        if (!digits) c_.fail_at(at, "expected a row count after LIMIT");
        uint64_t n = 0;
        try {
            n = std::stoull(token);
        } catch (const std::out_of_range&) {
            c_.fail_at(at, "row count out of range");
        }
        if (n == 0) c_.fail_at(at, "LIMIT requires a count of at least 1");
        ast.limit = n;
    }

    Cursor c_;
};

}  // namespace

QueryAst parse(std::string_view text) { return Parser(text).run(); }

}  // namespace mdb::query
