#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mdb/exec/leapfrog.hpp"
#include "mdb/exec/operator.hpp"
#include "mdb/exec/run.hpp"
#include "mdb/plan/cost.hpp"
#include "mdb/plan/logical.hpp"

namespace mdb::plan {

// Join execution strategy. Auto uses the multiway intersection join on every
// pattern block it can serve and classical index nested loops elsewhere; the
// forced settings apply one strategy everywhere (a forced intersection join
// on a block it cannot serve fails with StrategyUnavailableError).
enum class Strategy { Auto, NestedLoop, Leapfrog };

// Ready-to-run form of a query. Owns the logical plan and the execution
// context; like the logical plan it borrows the parsed query, which must
// stay alive while the plan runs.
struct PhysicalPlan {
    LogicalPlan logical;
    std::unique_ptr<exec::ExecContext> ctx;
    exec::OperatorPtr root;
    exec::ModifierSpec modifiers;
    std::string text;  // stable rendering of the operator tree

    // Result stream over the whole plan; one live stream at a time.
    std::unique_ptr<exec::ResultStream> stream() {
        return std::make_unique<exec::ResultStream>(*ctx, *root, modifiers);
    }
};

// Chosen multiway-join layout for one block: the global variable order and,
// per atom, the permutation serving it with columns in tree order.
struct LeapfrogChoice {
    std::vector<std::string> order;
    std::vector<exec::ScanSpec> atoms;
};

// Searches for a global variable order in which every atom of the block is
// served by some stored permutation: variables are chosen greedily (smallest
// estimated containing relation first, connected to the already-chosen ones
// when possible) among those every containing atom can take next. Empty when
// the block has a path pattern, an atom repeats an unbound variable, or no
// order is found (the search is conservative).
std::optional<LeapfrogChoice> leapfrog_plan(const MatchNode& block, const Catalog& catalog,
                                            const std::set<std::string>& bound);

// The two views of the search above.
bool leapfrog_applicable(const MatchNode& block, const Catalog& catalog,
                         const std::set<std::string>& bound);
std::optional<std::vector<std::string>> leapfrog_variable_order(
    const MatchNode& block, const Catalog& catalog, const std::set<std::string>& bound);

// Compiles the logical plan into an operator tree over the database.
PhysicalPlan emit_physical(LogicalPlan logical, Database& db, Strategy strategy);

// Whole pipeline for a parsed query: logical plan, simplification, emission.
PhysicalPlan make_plan(const query::FormalQuery& q, Database& db,
                       Strategy strategy = Strategy::Auto);

}  // namespace mdb::plan
