#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdb/core/value.hpp"
#include "mdb/query/query.hpp"

// Logical query plans. The desugared query is flattened into a tree of
// match nodes (one per conjunctive block, atoms in planner-uniform shape)
// with optional-extension nodes above them, and the modifier stack
// (where / order by / limit / select) recorded alongside.
//
// A logical plan borrows the query it was built from: path atoms keep
// pointers to the query's path expressions. The query must outlive the plan.
namespace mdb::plan {

// One relation atom with its columns as terms, uniformly addressable by
// index. Column order follows the relation schemas:
//   Object: [o]          Label: [object, label]     Prop: [object, key, value]
//   Edge:   [source, type, target, edge]            Path: [source, target]
struct Atom {
    enum class Kind { Object, Label, Prop, Edge, Path };
    Kind kind = Kind::Object;
    std::vector<query::Term> cols;
    const query::PathRel* path = nullptr;  // Kind::Path only; borrowed

    std::set<std::string> vars() const;
};

// A conjunctive block: join atoms, then path atoms (always evaluated after
// the joins), plus constant assignments contributed by simplification.
// Assignments extend every produced mapping; they keep variables visible to
// selection and ordering after an equality constant was pushed into the
// atoms.
struct MatchNode {
    std::vector<Atom> atoms;   // non-path atoms
    std::vector<Atom> paths;   // path atoms, in query order
    std::vector<std::pair<std::string, ObjectId>> assignments;

    std::set<std::string> vars() const;
};

// OpMatch leaf or OpOptional extension node.
struct PatternNode {
    enum class Kind { Match, Optional };
    Kind kind = Kind::Match;
    MatchNode match;                         // Kind::Match
    std::unique_ptr<PatternNode> left;       // Kind::Optional
    std::unique_ptr<PatternNode> right;

    std::set<std::string> vars() const;
};

struct LogicalPlan {
    std::unique_ptr<PatternNode> pattern;    // never null
    query::ConditionPtr where;               // null when the condition is True
    std::vector<query::SelectionElement> select;
    std::vector<query::OrderKey> order;
    uint64_t limit = 0;
};

// Flattens the query pattern into the plan shape. Conjunctions of basic
// blocks merge into one match node; optional extensions become Optional
// nodes preserving nesting.
LogicalPlan build_logical(const query::FormalQuery& q);

// Pushes equality constants from the condition into the pattern:
//   ?v == c    substitutes c for ?v in every atom column and records the
//              assignment on the root block;
//   ?v.k == c  adds a property atom to the root block.
// Only conjuncts over variables of the mandatory root block are absorbed
// (filters over optional-only variables drop unbound rows, which atom
// absorption would not), and only conjuncts of the top-level AND chain.
// The dictionary resolves long property keys; without one, only keys short
// enough to inline are absorbed.
void simplify(LogicalPlan& plan, const ValueDict* dict);
void simplify(LogicalPlan& plan);

// Renders object constants for plan text.
using Fmt = std::function<std::string(ObjectId)>;

// Stable text pieces shared by the plan renderings.
std::string term_text(const query::Term& t, const Fmt& fmt);
std::string rpq_text(const query::Rpq& r, const Fmt& fmt);
std::string condition_text(const query::Condition& c, const Fmt& fmt);
std::string atom_text(const Atom& a, const Fmt& fmt);

// Stable text rendering of the logical tree. fmt renders object constants.
std::string explain_logical(const LogicalPlan& plan, const Fmt& fmt);

}  // namespace mdb::plan
