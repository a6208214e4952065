#pragma once

#include <set>
#include <string>
#include <vector>

#include "mdb/plan/logical.hpp"
#include "mdb/storage/catalog.hpp"

// Cardinality estimation and join ordering. Estimates follow the standard
// independence model: an atom starts from its relation's cardinality (or the
// exact per-constant bucket when the catalog has one) and each bound column
// divides by that column's distinct count. "Bound" means a constant or a
// variable already bound by earlier atoms. When a distinct count is missing
// from the catalog the estimator assumes 10.
//
// Join orders are scored by the sum of estimated intermediate result sizes.
// An atom that introduces only fresh variables while earlier atoms already
// bound some (a cross product) has its contribution multiplied by a large
// penalty so connected orders win whenever one exists.
namespace mdb::plan {

inline constexpr double kDistinctFallback = 10.0;
inline constexpr double kCrossPenalty = 1e6;

class CostModel {
public:
    explicit CostModel(const Catalog& catalog) : cat_(catalog) {}

    // Estimated result size of one atom given the bound variables.
    // Non-negative and finite; smaller whenever more columns are bound.
    double atom_estimate(const Atom& atom, const std::set<std::string>& bound) const;

    // Sum of intermediate sizes of the prefix, with cross-product penalty.
    // `initial` names variables bound before the first atom runs (by an
    // enclosing pattern or by constant assignments).
    double order_cost(const std::vector<Atom>& atoms, const std::vector<std::size_t>& order,
                      const std::set<std::string>& initial = {}) const;

private:
    const Catalog& cat_;
};

// Dynamic programming over atom subsets; left-deep order minimizing
// order_cost. Ties break toward the lexicographically smallest index
// sequence. Intended for small atom counts (the strategy threshold).
std::vector<std::size_t> plan_selinger(const std::vector<Atom>& atoms, const Catalog& catalog,
                                       const std::set<std::string>& initial = {});

// Greedy ordering: repeatedly appends the atom with the cheapest estimate
// given the variables bound so far (same penalty rule); ties keep input
// order.
std::vector<std::size_t> plan_greedy(const std::vector<Atom>& atoms, const Catalog& catalog,
                                     const std::set<std::string>& initial = {});

// Atom count at and below which the dynamic program is used.
inline constexpr std::size_t kSelingerLimit = 12;

// plan_selinger up to kSelingerLimit atoms, plan_greedy above.
std::vector<std::size_t> plan_join_order(const std::vector<Atom>& atoms, const Catalog& catalog,
                                         const std::set<std::string>& initial = {});

}  // namespace mdb::plan
