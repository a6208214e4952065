#pragma once

#include <cstdint>
#include <vector>

#include "mdb/core/object_id.hpp"
#include "mdb/query/query.hpp"

namespace mdb::path {

// Finite automaton for a path expression, ready for product traversal with
// the graph: no epsilon transitions, and every state lies on some path from
// the start to a final state (the start state is always kept). A transition
// consumes one graph edge of the given type, walked forward or backward.
struct RpqAutomaton {
    struct Arc {
        ObjectId type;
        bool forward = true;
        uint32_t to = 0;
    };

    std::vector<std::vector<Arc>> arcs;  // indexed by state
    std::vector<bool> final_state;       // indexed by state
    uint32_t start = 0;

    std::size_t size() const { return arcs.size(); }
    bool accepts_empty() const { return final_state[start]; }
};

// Builds the automaton for an expression: expression tree to transitions
// with epsilons, epsilon elimination, then trimming of states that cannot
// take part in an accepting run. With `reversed` the automaton recognizes
// the reversal of every word with each step's direction flipped, so running
// it from a path's target finds exactly the sources.
RpqAutomaton compile_rpq(const query::Rpq& expr, bool reversed = false);

}  // namespace mdb::path
