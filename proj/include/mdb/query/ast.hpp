#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Abstract syntax of the query language, straight off the surface text.
// Nothing here is resolved against a database: names, labels, keys and type
// tokens are plain strings, and no fresh variables have been introduced yet.
// Desugaring (see desugar.hpp) turns this into the formal query tuple.
//
// Surface shape, by clause:
//   SELECT * | e1, e2, ...            e := ?var | ?var.key
//   MATCH    atoms, then OPTIONAL { ... } blocks (commas optional)
//   WHERE    boolean tree over comparisons (optional clause)
//   ORDER BY e [ASC|DESC] | ASC|DESC (e)    and    LIMIT n   (either order)
//
// Pattern atoms:
//   (?x :label {key : "value"})                  node
//   (a)-[?e type {key : "v"}]->(b)               edge; ?e optional, type may be
//                                                TYPE(?t) or omitted entirely
//   (a)=[?p rpq]=>(b)                            path; ?p optional
// Chains like (a)-[t]->(b)-[u]->(c) decompose into one atom per edge.
// Node and edge decorations (labels, inline properties) attach where written.
//
// Variables are written `?name` and are case-sensitive; keywords are
// case-insensitive. Names, property keys and rpq type tokens may contain
// spaces; quoting is only for string values.
namespace mdb::query {

// A term in node position or a constant in a condition.
struct AstTerm {
    enum class Kind { Variable, Name, String, Integer, Anonymous };
    Kind kind = Kind::Anonymous;
    std::string text;    // Variable: with leading '?'. Name/String: content.
    int64_t number = 0;  // Integer only.

    friend bool operator==(const AstTerm&, const AstTerm&) = default;
};

// key : value inside a { ... } block; value is a String or Integer term.
struct AstProperty {
    std::string key;
    AstTerm value;
    friend bool operator==(const AstProperty&, const AstProperty&) = default;
};

// A parenthesized endpoint with its decorations.
struct AstNode {
    AstTerm term;
    std::vector<std::string> labels;
    std::vector<AstProperty> props;
    friend bool operator==(const AstNode&, const AstNode&) = default;
};

// The interior of -[ ... ]->.
struct AstEdge {
    std::optional<std::string> edge_var;   // ?e, if written
    std::optional<std::string> type_name;  // bare type constant
    std::optional<std::string> type_var;   // TYPE(?t)
    std::vector<AstProperty> props;
    friend bool operator==(const AstEdge&, const AstEdge&) = default;
};

// Regular path expression tree as written. `?` and `+` are kept structural
// here and expanded during desugaring (r? into epsilon-or-r, r+ into r/r*).
// Precedence, loosest to tightest: | then / then ^ then postfix * + ?, so
// ^child* reads as ^(child*).
struct RpqNode;
using RpqPtr = std::unique_ptr<RpqNode>;

struct RpqNode {
    enum class Kind { Type, Concat, Alternation, Inverse, Star, Plus, Maybe };
    Kind kind = Kind::Type;
    std::string type_name;  // Kind::Type
    RpqPtr left, right;     // unary kinds use left only
};

RpqPtr make_rpq_type(std::string type_name);
RpqPtr make_rpq(RpqNode::Kind kind, RpqPtr left, RpqPtr right = nullptr);
RpqPtr clone_rpq(const RpqNode& node);
bool rpq_equal(const RpqNode* a, const RpqNode* b);

// The interior of =[ ... ]=>.
struct AstPath {
    std::optional<std::string> path_var;  // ?p, if written
    RpqPtr rpq;
};

inline bool operator==(const AstPath& a, const AstPath& b) {
    return a.path_var == b.path_var && rpq_equal(a.rpq.get(), b.rpq.get());
}

// One pattern atom. Chains are already decomposed; when a chain reuses a
// node, the repeated occurrence carries the bare term with no decorations
// (they were emitted with the first occurrence).
struct PatternAtom {
    enum class Kind { Node, Edge, Path };
    Kind kind = Kind::Node;
    AstNode node;          // Kind::Node
    AstNode source, target;  // Edge and Path endpoints
    AstEdge edge;          // Kind::Edge
    AstPath path;          // Kind::Path
};

bool atom_equal(const PatternAtom& a, const PatternAtom& b);

// Conjunction of atoms, or an optional extension of one pattern by another.
// Atoms never follow an OPTIONAL block inside one body; later blocks nest
// leftward, so `a OPTIONAL {b} OPTIONAL {c}` is Optional(Optional(a, b), c).
struct MatchPattern {
    enum class Kind { Atoms, Optional };
    Kind kind = Kind::Atoms;
    std::vector<PatternAtom> atoms;           // Kind::Atoms
    std::unique_ptr<MatchPattern> outer, inner;  // Kind::Optional
};

bool pattern_equal(const MatchPattern& a, const MatchPattern& b);

// ?x or ?x.key — what SELECT and ORDER BY operate on.
struct SelectionElement {
    std::string var;  // with leading '?'
    std::optional<std::string> key;

    // The row-header form: "?x" or "?x.key".
    std::string text() const { return key ? var + "." + *key : var; }
    friend bool operator==(const SelectionElement&, const SelectionElement&) = default;
};

// WHERE tree. Comparison atoms keep their surface constants (resolution
// happens at desugar time); var-vs-var and var-vs-constant comparisons are
// written with == or != only.
struct AstCondition;
using AstConditionPtr = std::unique_ptr<AstCondition>;

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

std::string cmp_text(Cmp op);

struct AstCondition {
    enum class Kind {
        VarVsVar,     // ?x == ?y / ?x != ?y
        VarVsConst,   // ?x == constant / !=
        PropVsProp,   // ?x.k1 op ?y.k2
        PropVsConst,  // ?x.k op value
        Not,
        And,
        Or,
    };
    Kind kind = Kind::VarVsVar;
    Cmp op = Cmp::Eq;
    std::string left_var, right_var;
    std::string left_key, right_key;  // property forms
    AstTerm constant;                 // *VsConst forms
    AstConditionPtr left, right;      // connectives; Not uses left only
};

bool condition_equal(const AstCondition* a, const AstCondition* b);

struct AstOrderKey {
    SelectionElement element;
    bool descending = false;
    friend bool operator==(const AstOrderKey&, const AstOrderKey&) = default;
};

struct QueryAst {
    bool select_star = false;
    std::vector<SelectionElement> select;  // empty when select_star
    MatchPattern match;
    AstConditionPtr where;  // null when no WHERE clause
    std::vector<AstOrderKey> order_by;
    std::optional<uint64_t> limit;  // present implies >= 1
};

bool query_equal(const QueryAst& a, const QueryAst& b);

}  // namespace mdb::query
