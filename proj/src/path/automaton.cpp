#include "mdb/path/automaton.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace mdb::path {

namespace {

// Intermediate machine with epsilon moves, built by structural induction:
// every sub-expression contributes a fragment with one entry and one exit.
struct EpsNfa {
    struct Arc {
        ObjectId type;
        bool forward;
        uint32_t to;
    };
    std::vector<std::vector<Arc>> arcs;
    std::vector<std::vector<uint32_t>> eps;

    uint32_t add_state() {
        arcs.emplace_back();
        eps.emplace_back();
        return uint32_t(arcs.size() - 1);
    }
};

struct Fragment {
    uint32_t entry;
    uint32_t exit;
};

Fragment build(const query::Rpq& e, EpsNfa& nfa, bool invert) {
    using K = query::Rpq::Kind;
    switch (e.kind) {
        case K::Epsilon: {
            uint32_t s = nfa.add_state();
            return {s, s};
        }
        case K::Type: {
            uint32_t in = nfa.add_state();
            uint32_t out = nfa.add_state();
            nfa.arcs[in].push_back({e.type, !invert, out});
            return {in, out};
        }
        case K::Inverse:
            return build(*e.left, nfa, !invert);
        case K::Concat: {
            // Under an odd number of enclosing inverses the whole walk runs
            // backwards, so the right part comes first.
            const query::Rpq& first = invert ? *e.right : *e.left;
            const query::Rpq& second = invert ? *e.left : *e.right;
            Fragment a = build(first, nfa, invert);
            Fragment b = build(second, nfa, invert);
            nfa.eps[a.exit].push_back(b.entry);
            return {a.entry, b.exit};
        }
        case K::Alternation: {
            uint32_t in = nfa.add_state();
            uint32_t out = nfa.add_state();
            Fragment a = build(*e.left, nfa, invert);
            Fragment b = build(*e.right, nfa, invert);
            nfa.eps[in].push_back(a.entry);
            nfa.eps[in].push_back(b.entry);
            nfa.eps[a.exit].push_back(out);
            nfa.eps[b.exit].push_back(out);
            return {in, out};
        }
        case K::Star: {
            uint32_t hub = nfa.add_state();
            Fragment a = build(*e.left, nfa, invert);
            nfa.eps[hub].push_back(a.entry);
            nfa.eps[a.exit].push_back(hub);
            return {hub, hub};
        }
    }
    uint32_t s = nfa.add_state();
    return {s, s};
}

std::vector<uint32_t> eps_closure(const EpsNfa& nfa, uint32_t from) {
    std::vector<uint32_t> out;
    std::vector<bool> seen(nfa.eps.size(), false);
    std::vector<uint32_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        uint32_t s = stack.back();
        stack.pop_back();
        out.push_back(s);
        for (uint32_t t : nfa.eps[s]) {
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    return out;
}

}  // namespace

RpqAutomaton compile_rpq(const query::Rpq& expr, bool reversed) {
    EpsNfa nfa;
    Fragment frag = build(expr, nfa, false);
    uint32_t entry = frag.entry;
    uint32_t exit = frag.exit;
    if (reversed) {
        // Reverse every transition and swap the endpoints: the machine then
        // reads words back to front, with each step's direction flipped.
        EpsNfa rev;
        for (std::size_t i = 0; i < nfa.arcs.size(); ++i) rev.add_state();
        for (uint32_t s = 0; s < nfa.arcs.size(); ++s) {
            for (const auto& a : nfa.arcs[s]) rev.arcs[a.to].push_back({a.type, !a.forward, s});
            for (uint32_t t : nfa.eps[s]) rev.eps[t].push_back(s);
        }
        nfa = std::move(rev);
        std::swap(entry, exit);
    }

    // Epsilon elimination: a state inherits the labelled arcs of its closure
    // and is final when the closure touches the accepting state.
    std::size_t n = nfa.arcs.size();
    std::vector<std::vector<RpqAutomaton::Arc>> arcs(n);
    std::vector<bool> final_state(n, false);
    for (uint32_t s = 0; s < n; ++s) {
        std::set<std::tuple<uint64_t, bool, uint32_t>> dedup;
        for (uint32_t c : eps_closure(nfa, s)) {
            if (c == exit) final_state[s] = true;
            for (const auto& a : nfa.arcs[c]) {
                if (dedup.insert({a.type.raw, a.forward, a.to}).second) {
                    arcs[s].push_back({a.type, a.forward, a.to});
                }
            }
        }
    }

    // Trim: keep states reachable from the start and able to reach a final
    // state; the start state itself always survives.
    std::vector<bool> reach(n, false);
    {
        std::vector<uint32_t> stack{entry};
        reach[entry] = true;
        while (!stack.empty()) {
            uint32_t s = stack.back();
            stack.pop_back();
            for (const auto& a : arcs[s]) {
                if (!reach[a.to]) {
                    reach[a.to] = true;
                    stack.push_back(a.to);
                }
            }
        }
    }
    std::vector<bool> productive(n, false);
    {
        std::vector<std::vector<uint32_t>> rev_to(n);
        for (uint32_t s = 0; s < n; ++s) {
            for (const auto& a : arcs[s]) rev_to[a.to].push_back(s);
        }
        std::vector<uint32_t> stack;
        for (uint32_t s = 0; s < n; ++s) {
            if (final_state[s]) {
                productive[s] = true;
                stack.push_back(s);
            }
        }
        while (!stack.empty()) {
            uint32_t s = stack.back();
            stack.pop_back();
            for (uint32_t p : rev_to[s]) {
                if (!productive[p]) {
                    productive[p] = true;
                    stack.push_back(p);
                }
            }
        }
    }

    std::vector<uint32_t> remap(n, UINT32_MAX);
    RpqAutomaton out;
    for (uint32_t s = 0; s < n; ++s) {
        bool keep = (reach[s] && productive[s]) || s == entry;
        if (!keep) continue;
        remap[s] = uint32_t(out.arcs.size());
        out.arcs.emplace_back();
        out.final_state.push_back(final_state[s]);
    }
    for (uint32_t s = 0; s < n; ++s) {
        if (remap[s] == UINT32_MAX) continue;
        for (const auto& a : arcs[s]) {
            if (remap[a.to] == UINT32_MAX) continue;
            if (!reach[a.to] || !productive[a.to]) continue;
            out.arcs[remap[s]].push_back({a.type, a.forward, remap[a.to]});
        }
    }
    out.start = remap[entry];
    return out;
}

}  // namespace mdb::path
