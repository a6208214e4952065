#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "mdb/algebra/solution.hpp"
#include "mdb/path/automaton.hpp"
#include "mdb/storage/database.hpp"

namespace mdb::path {

// One object reached from the search origin, with the path that proves it
// when witness tracking is on.
struct PathHit {
    ObjectId object;
    std::optional<algebra::PathWitness> witness;
};

// Breadth-first product search from one origin object. Emits every object
// reachable by a word of the automaton exactly once, shortest layer first.
// Edges are pulled from the stored type-indexed permutations on demand, so
// only the page under the current cursor stays pinned.
//
// Candidates of a layer are settled in order of (parent settlement rank,
// edge id, target state), which makes the recorded parent chain of the first
// final-state settlement of an object the canonical witness: among the
// shortest paths the one with the lexicographically smallest edge-id
// sequence.
class PathSearch {
public:
    PathSearch(Database& db, const RpqAutomaton& automaton, ObjectId origin, bool track_witness);

    // Next reached object (each exactly once), or nothing when exhausted.
    std::optional<PathHit> next();

    // Product states settled so far; bounded by objects times automaton states.
    std::size_t visited() const { return nodes_.size(); }

private:
    struct Node {
        ObjectId object;
        uint32_t state = 0;
        std::size_t parent = 0;  // index into nodes_; self for the origin
        ObjectId edge;           // edge taken into this node (none for origin)
        bool edge_forward = true;
    };

    void expand_layer();
    algebra::PathWitness witness_of(std::size_t node) const;

    Database* db_;
    const RpqAutomaton* automaton_;
    bool track_witness_;

    std::vector<Node> nodes_;                      // settlement order = rank
    std::map<std::pair<uint64_t, uint32_t>, std::size_t> seen_;  // (object, state) -> node
    std::vector<std::size_t> frontier_;            // current layer, by rank
    std::set<uint64_t> emitted_;                   // objects already produced
    std::deque<std::size_t> pending_;              // settled final nodes not yet emitted
};

// Canonical witness for one endpoint pair: the search above, stopped at the
// first final settlement of `target`. Nothing when the pair is unreachable.
std::optional<algebra::PathWitness> canonical_between(Database& db, const RpqAutomaton& automaton,
                                                      ObjectId source, ObjectId target);

}  // namespace mdb::path
