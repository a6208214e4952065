#include <algorithm>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "mdb/algebra/eval.hpp"

namespace mdb::algebra {

namespace {

// Relational composition {(x, z) | (x, y) in a, (y, z) in b}.
PairSet compose(const PairSet& a, const PairSet& b) {
    std::multimap<ObjectId, ObjectId> by_first;
    for (const auto& [x, y] : b) by_first.emplace(x, y);
    PairSet out;
    for (const auto& [x, y] : a) {
        auto [lo, hi] = by_first.equal_range(y);
        for (auto it = lo; it != hi; ++it) out.emplace(x, it->second);
    }
    return out;
}

PairSet identity_pairs(const ReferenceGraph& g) {
    PairSet out;
    for (ObjectId o : g.objects()) out.emplace(o, o);
    return out;
}

}  // namespace

PairSet eval_rpq(const query::Rpq& r, const ReferenceGraph& g) {
    using K = query::Rpq::Kind;
    switch (r.kind) {
        case K::Epsilon:
            return identity_pairs(g);
        case K::Type: {
            PairSet out;
            for (const auto& e : g.edges())
                if (e.type == r.type) out.emplace(e.source, e.target);
            return out;
        }
        case K::Concat:
            return compose(eval_rpq(*r.left, g), eval_rpq(*r.right, g));
        case K::Alternation: {
            PairSet out = eval_rpq(*r.left, g);
            PairSet rhs = eval_rpq(*r.right, g);
            out.insert(rhs.begin(), rhs.end());
            return out;
        }
        case K::Inverse: {
            PairSet out;
            for (const auto& [x, y] : eval_rpq(*r.left, g)) out.emplace(y, x);
            return out;
        }
        case K::Star: {
            // Least fixpoint over the single-step relation, seeded with the
            // identity over every object.
            PairSet base = eval_rpq(*r.left, g);
            PairSet acc = identity_pairs(g);
            while (true) {
                PairSet grown = compose(acc, base);
                std::size_t before = acc.size();
                acc.insert(grown.begin(), grown.end());
                if (acc.size() == before) break;
            }
            return acc;
        }
    }
    return {};
}

namespace {

// Nondeterministic automaton over (type, direction) steps with epsilon
// moves, built by the standard recursive construction; inversion is pushed
// to the leaves (reversing concatenation order and flipping direction).
struct Nfa {
    struct Arc {
        ObjectId type;
        bool forward;
        int to;
    };
    std::vector<std::vector<Arc>> arcs;
    std::vector<std::vector<int>> eps;

    int add_state() {
        arcs.emplace_back();
        eps.emplace_back();
        return static_cast<int>(arcs.size()) - 1;
    }
};

std::pair<int, int> build_nfa(const query::Rpq& r, bool inverted, Nfa& nfa) {
    using K = query::Rpq::Kind;
    switch (r.kind) {
        case K::Epsilon: {
            int in = nfa.add_state(), out = nfa.add_state();
            nfa.eps[in].push_back(out);
            return {in, out};
        }
        case K::Type: {
            int in = nfa.add_state(), out = nfa.add_state();
            nfa.arcs[in].push_back({r.type, !inverted, out});
            return {in, out};
        }
        case K::Concat: {
            const query::Rpq& first = inverted ? *r.right : *r.left;
            const query::Rpq& second = inverted ? *r.left : *r.right;
            auto a = build_nfa(first, inverted, nfa);
            auto b = build_nfa(second, inverted, nfa);
            nfa.eps[a.second].push_back(b.first);
            return {a.first, b.second};
        }
        case K::Alternation: {
            int in = nfa.add_state(), out = nfa.add_state();
            auto a = build_nfa(*r.left, inverted, nfa);
            auto b = build_nfa(*r.right, inverted, nfa);
            nfa.eps[in].push_back(a.first);
            nfa.eps[in].push_back(b.first);
            nfa.eps[a.second].push_back(out);
            nfa.eps[b.second].push_back(out);
            return {in, out};
        }
        case K::Inverse:
            return build_nfa(*r.left, !inverted, nfa);
        case K::Star: {
            int in = nfa.add_state(), out = nfa.add_state();
            auto a = build_nfa(*r.left, inverted, nfa);
            nfa.eps[in].push_back(a.first);
            nfa.eps[in].push_back(out);
            nfa.eps[a.second].push_back(a.first);
            nfa.eps[a.second].push_back(out);
            return {in, out};
        }
    }
    return {0, 0};
}

}  // namespace

std::optional<PathWitness> canonical_witness(const query::Rpq& r, ObjectId source,
                                             ObjectId target, const ReferenceGraph& g) {
    Nfa nfa;
    auto [start, accept] = build_nfa(r, /*inverted=*/false, nfa);

    // Shortest-path search over (object, state) where the key is the edge-id
    // sequence, compared by length then lexicographically. The first time a
    // product state is settled, its key is minimal, so the first settle of
    // (target, accept) carries the canonical witness.
    struct Entry {
        std::vector<uint64_t> seq;
        ObjectId object;
        int state;
        int parent;      // index into the settled list; -1 for the source
        ObjectId edge;   // raw 0 for an epsilon move
    };
    auto worse = [](const Entry& a, const Entry& b) {
        if (a.seq.size() != b.seq.size()) return a.seq.size() > b.seq.size();
        return a.seq > b.seq;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);
    std::map<std::pair<uint64_t, int>, int> settled_at;
    std::vector<Entry> settled;

    queue.push({{}, source, start, -1, ObjectId{}});
    while (!queue.empty()) {
        Entry cur = queue.top();
        queue.pop();
        auto key = std::make_pair(cur.object.raw, cur.state);
        if (settled_at.count(key)) continue;
        int idx = static_cast<int>(settled.size());
        settled.push_back(cur);
        settled_at.emplace(key, idx);

        if (cur.object == target && cur.state == accept) {
            std::vector<ObjectId> objects{settled[idx].object};
            std::vector<ObjectId> edges;
            for (int at = idx; settled[at].parent != -1; at = settled[at].parent) {
                const Entry& e = settled[at];
                if (e.edge.raw != 0) {
                    edges.push_back(e.edge);
                    objects.push_back(settled[e.parent].object);
                }
            }
            std::reverse(objects.begin(), objects.end());
            std::reverse(edges.begin(), edges.end());
            return PathWitness{std::move(objects), std::move(edges)};
        }

        for (int next : nfa.eps[cur.state])
            if (!settled_at.count({cur.object.raw, next}))
                queue.push({cur.seq, cur.object, next, idx, ObjectId{}});
        for (const auto& arc : nfa.arcs[cur.state]) {
            for (const auto& e : g.edges()) {
                if (e.type != arc.type) continue;
                ObjectId from = arc.forward ? e.source : e.target;
                ObjectId to = arc.forward ? e.target : e.source;
                if (from != cur.object) continue;
                if (settled_at.count({to.raw, arc.to})) continue;
                Entry next{cur.seq, to, arc.to, idx, e.eid};
                next.seq.push_back(e.eid.raw);
                queue.push(std::move(next));
            }
        }
    }
    return std::nullopt;
}

}  // namespace mdb::algebra
