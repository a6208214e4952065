#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mdb/core/object_id.hpp"
#include "mdb/query/ast.hpp"

// The formal query tuple (pattern, condition, selection, order, limit) that
// desugaring produces and both evaluators consume. All constants are resolved
// to object ids here; anonymous positions carry fresh variables; label and
// inline-property sugar has been lowered to relation atoms.
//
// The pattern is a tree over basic blocks. A basic block is a conjunction of
// atoms over the stored relations
//     Objects(o)   Labels(object, label)   Properties(object, key, value)
//     Connections(source, type, target, edge)
// plus regular path atoms. Internal nodes conjoin (And) or optionally extend
// (Opt) sub-patterns.
namespace mdb::query {

// A variable or a resolved constant. Constants that named nothing in the
// database are sentinel ids (tag byte 0, payload >= 1): valid to compare,
// never equal to any stored object.
struct Term {
    bool is_var = false;
    std::string var;      // with leading '?'
    ObjectId constant;    // when !is_var

    static Term variable(std::string name) { return {true, std::move(name), {}}; }
    static Term object(ObjectId id) { return {false, {}, id}; }
    friend bool operator==(const Term&, const Term&) = default;
};

struct ObjectAtom {  // Objects(o)
    Term object;
    friend bool operator==(const ObjectAtom&, const ObjectAtom&) = default;
};

struct LabelAtom {  // Labels(object, label)
    Term object;
    ObjectId label;
    friend bool operator==(const LabelAtom&, const LabelAtom&) = default;
};

struct PropAtom {  // Properties(object, key, value)
    Term object;
    ObjectId key;
    Term value;
    friend bool operator==(const PropAtom&, const PropAtom&) = default;
};

struct EdgeRel {  // Connections(source, type, target, edge)
    Term source, type, target, edge;
    friend bool operator==(const EdgeRel&, const EdgeRel&) = default;
};

// Regular path expression with resolved type constants. The surface forms
// r? and r+ are gone: desugaring expands them into epsilon-alternation and
// concat-with-star.
struct Rpq;
using RpqExprPtr = std::unique_ptr<Rpq>;

struct Rpq {
    enum class Kind { Epsilon, Type, Concat, Alternation, Inverse, Star };
    Kind kind = Kind::Epsilon;
    ObjectId type;           // Kind::Type
    RpqExprPtr left, right;  // Inverse and Star use left only
};

RpqExprPtr make_path_epsilon();
RpqExprPtr make_path_type(ObjectId type);
RpqExprPtr make_path(Rpq::Kind kind, RpqExprPtr left, RpqExprPtr right = nullptr);
RpqExprPtr clone_path(const Rpq& node);
bool path_equal(const Rpq* a, const Rpq* b);

struct PathRel {  // endpoints connected by a path satisfying the expression
    Term source, target;
    std::optional<std::string> path_var;  // bound to a shortest witness
    RpqExprPtr rpq;
};

struct BasicPattern {
    std::vector<ObjectAtom> objects;
    std::vector<LabelAtom> labels;
    std::vector<PropAtom> props;
    std::vector<EdgeRel> edges;
    std::vector<PathRel> paths;

    bool empty() const {
        return objects.empty() && labels.empty() && props.empty() && edges.empty() &&
               paths.empty();
    }
};

struct RelationalPattern {
    enum class Kind { Basic, And, Opt };
    Kind kind = Kind::Basic;
    BasicPattern basic;  // Kind::Basic
    std::unique_ptr<RelationalPattern> left, right;
};

using PatternPtr = std::unique_ptr<RelationalPattern>;

PatternPtr make_basic(BasicPattern block);
PatternPtr make_compound(RelationalPattern::Kind kind, PatternPtr left, PatternPtr right);

// Resolved condition tree. Variable comparisons are equality atoms (surface
// != was compiled to Not(==)); property comparisons carry the full operator
// set. A comparison over an unbound variable or an undefined property is
// unsatisfied.
struct Condition;
using ConditionPtr = std::unique_ptr<Condition>;

struct Condition {
    enum class Kind {
        True,          // no WHERE clause
        VarEqVar,      // left_var == right_var
        VarEqConst,    // left_var == constant
        PropCmpProp,   // left_var.left_key op right_var.right_key
        PropCmpConst,  // left_var.left_key op constant
        Not,
        And,
        Or,
    };
    Kind kind = Kind::True;
    Cmp op = Cmp::Eq;
    std::string left_var, right_var;
    std::string left_key, right_key;
    ObjectId constant;
    ConditionPtr left, right;  // Not uses left only
};

ConditionPtr make_condition_true();
ConditionPtr make_condition(Condition::Kind kind, ConditionPtr left, ConditionPtr right = nullptr);

struct OrderKey {
    SelectionElement element;
    bool descending = false;
    friend bool operator==(const OrderKey&, const OrderKey&) = default;
};

struct FormalQuery {
    PatternPtr pattern;                     // never null
    ConditionPtr condition;                 // never null; True when absent
    std::vector<SelectionElement> select;   // explicit (star expanded)
    std::vector<OrderKey> order;            // empty when no ORDER BY
    uint64_t limit = 0;                     // 0 = no limit
};

// Variables of one basic block: node/edge/value positions plus path
// variables.
void collect_vars(const BasicPattern& block, std::set<std::string>& out);
// All variables of a pattern tree.
std::set<std::string> pattern_vars(const RelationalPattern& pattern);
// All variables mentioned by a condition tree.
std::set<std::string> condition_vars(const Condition& condition);

}  // namespace mdb::query
