#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdb/algebra/solution.hpp"
#include "mdb/core/reference_graph.hpp"
#include "mdb/core/value.hpp"
#include "mdb/query/query.hpp"

// Reference evaluator: the mapping-set operators, homomorphism evaluation of
// basic and navigational patterns, path-expression evaluation by its defining
// equations, condition satisfaction, and solution modifiers — composed into a
// fully materialized, unoptimized evaluator over the in-memory graph. This is
// the ground truth the storage-backed engine is checked against.
namespace mdb::algebra {

// ---- Mapping-set operators ----------------------------------------------

MappingSet join(const MappingSet& a, const MappingSet& b);
MappingSet union_(const MappingSet& a, const MappingSet& b);
MappingSet difference(const MappingSet& a, const MappingSet& b);
// (a join b) union (a difference b).
MappingSet left_outer_join(const MappingSet& a, const MappingSet& b);

// ---- Pattern evaluation --------------------------------------------------

using ObjectPair = std::pair<ObjectId, ObjectId>;
using PairSet = std::set<ObjectPair>;

// Pairs of objects connected by a path satisfying the expression, computed
// from the defining equations: epsilon is the identity over all objects, a
// type matches single edges, and star is a least fixpoint. Paths may start
// and end at any object, including edge and value objects.
PairSet eval_rpq(const query::Rpq& r, const ReferenceGraph& g);

// Homomorphism evaluation of the non-path atoms of `pattern`, projected to
// the variable set V. Repeated-object solutions are permitted (two variables
// may map to one object). Path atoms are outside a basic pattern and are
// ignored here; eval_navigational adds them.
MappingSet eval_bgp(const std::set<std::string>& V, const query::BasicPattern& pattern,
                    const ReferenceGraph& g);

// Basic pattern plus path atoms, projected to V. Path endpoints join against
// eval_rpq existentially; a named path variable binds a transient id for the
// canonical witness, interned in `witnesses`.
MappingSet eval_navigational(const std::set<std::string>& V, const query::BasicPattern& pattern,
                             const ReferenceGraph& g, WitnessTable& witnesses);

// The canonical witness for a pair: among the paths from source to target
// satisfying r, a shortest one, tie-broken by the lexicographically smallest
// edge-id sequence. Empty when the pair is not connected by any such path.
std::optional<PathWitness> canonical_witness(const query::Rpq& r, ObjectId source,
                                             ObjectId target, const ReferenceGraph& g);

// ---- Conditions ----------------------------------------------------------

// Source of property values during condition evaluation: yields the value
// stored for (object, key name), or nothing when the property is undefined.
using PropProbe = std::function<std::optional<ObjectId>(ObjectId, const std::string&)>;

// Satisfaction of a selection condition under one mapping. A comparison whose
// variable is unbound or whose property is undefined is unsatisfied; ordered
// comparisons use the value order (strings by content, integers numerically).
bool eval_condition(const Mapping& mu, const query::Condition& c, const PropProbe& prop,
                    const ValueDict& dict);
bool eval_condition(const Mapping& mu, const query::Condition& c, const ReferenceGraph& g,
                    const ValueDict& dict);

// ---- Modifiers -----------------------------------------------------------

// Comparison used for ordering result values: null sorts before any value,
// path witnesses compare by content (length, then edge sequence), and
// everything else by the value order.
int solution_value_compare(const std::optional<ObjectId>& a, const std::optional<ObjectId>& b,
                           const WitnessTable& witnesses, const ValueDict& dict);

// Projects each mapping through the selection elements, sorts by the order
// keys (ties broken by the remaining keys, then by full-row canonical order),
// then keeps the first `limit` rows (limit 0 keeps everything). With no order
// keys the rows end up in full-row canonical order.
SolutionSequence apply_modifiers(const MappingSet& omega,
                                 const std::vector<query::SelectionElement>& select,
                                 const std::vector<query::OrderKey>& order, uint64_t limit,
                                 const ReferenceGraph& g, const ValueDict& dict,
                                 WitnessTable witnesses);

// ---- Whole-query oracle --------------------------------------------------

// Bottom-up evaluation of a well-designed query: conjunction is join,
// optional is left outer join, then the condition filter and the modifiers.
// Throws WellDesignednessError for a query that violates the conditions.
SolutionSequence oracle_evaluate(const query::FormalQuery& q, const ReferenceGraph& g,
                                 const ValueDict& dict);

}  // namespace mdb::algebra
