#include "mdb/path/search.hpp"

#include <algorithm>
#include <tuple>

namespace mdb::path {

namespace {

// True when the id denotes a stored object (so the empty path starts here).
bool is_stored_object(Database& db, ObjectId id) {
    BPlusTree::Record probe{id, ObjectId{}, ObjectId{}, ObjectId{}};
    auto it = db.tree(TreeId::Objects).prefix_scan(probe, 1);
    return it.valid();
}

}  // namespace

PathSearch::PathSearch(Database& db, const RpqAutomaton& automaton, ObjectId origin,
                       bool track_witness)
    : db_(&db), automaton_(&automaton), track_witness_(track_witness) {
    nodes_.push_back({origin, automaton.start, 0, ObjectId{}, true});
    seen_[{origin.raw, automaton.start}] = 0;
    frontier_.push_back(0);
    if (automaton.final_state[automaton.start] && is_stored_object(db, origin)) {
        emitted_.insert(origin.raw);
        pending_.push_back(0);
    }
}

algebra::PathWitness PathSearch::witness_of(std::size_t node) const {
    algebra::PathWitness w;
    std::size_t at = node;
    while (nodes_[at].parent != at) {
        w.objects.push_back(nodes_[at].object);
        w.edges.push_back(nodes_[at].edge);
        at = nodes_[at].parent;
    }
    w.objects.push_back(nodes_[at].object);
    std::reverse(w.objects.begin(), w.objects.end());
    std::reverse(w.edges.begin(), w.edges.end());
    return w;
}

// Settles the next layer of the product in canonical order: all candidate
// steps of the current layer sorted by (parent settlement rank, edge id,
// target state), first settlement of a product state wins.
void PathSearch::expand_layer() {
    struct Candidate {
        std::size_t parent;
        uint64_t edge_raw;
        uint32_t to_state;
        ObjectId to_object;
        bool forward;
    };
    std::vector<Candidate> candidates;
    for (std::size_t idx : frontier_) {
        ObjectId at = nodes_[idx].object;
        for (const auto& arc : automaton_->arcs[nodes_[idx].state]) {
            TreeId tree = arc.forward ? TreeId::DgYste : TreeId::DgYtse;
            BPlusTree::Record prefix{arc.type, at, ObjectId{}, ObjectId{}};
            for (auto it = db_->tree(tree).prefix_scan(prefix, 2); it.valid(); it.next()) {
                auto record = it.record();
                candidates.push_back({idx, record[3].raw, arc.to, record[2], arc.forward});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.parent, a.edge_raw, a.to_state) <
               std::tie(b.parent, b.edge_raw, b.to_state);
    });
    frontier_.clear();
    for (const auto& c : candidates) {
        auto key = std::make_pair(c.to_object.raw, c.to_state);
        if (seen_.count(key)) continue;
        std::size_t rank = nodes_.size();
        ObjectId edge;
        edge.raw = c.edge_raw;
        nodes_.push_back({c.to_object, c.to_state, c.parent, edge, c.forward});
        seen_[key] = rank;
        frontier_.push_back(rank);
        if (automaton_->final_state[c.to_state] && !emitted_.count(c.to_object.raw)) {
            emitted_.insert(c.to_object.raw);
            pending_.push_back(rank);
        }
    }
}

std::optional<PathHit> PathSearch::next() {
    while (pending_.empty() && !frontier_.empty()) expand_layer();
    if (pending_.empty()) return std::nullopt;
    std::size_t node = pending_.front();
    pending_.pop_front();
    PathHit hit;
    hit.object = nodes_[node].object;
    if (track_witness_) hit.witness = witness_of(node);
    return hit;
}

std::optional<algebra::PathWitness> canonical_between(Database& db, const RpqAutomaton& automaton,
                                                      ObjectId source, ObjectId target) {
    PathSearch search(db, automaton, source, true);
    while (auto hit = search.next()) {
        if (hit->object == target) return std::move(hit->witness);
    }
    return std::nullopt;
}

}  // namespace mdb::path
