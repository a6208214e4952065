#include "mdb/plan/cost.hpp"

#include <algorithm>
#include <cmath>

namespace mdb::plan {

namespace {

bool term_bound(const query::Term& t, const std::set<std::string>& bound) {
    return !t.is_var || bound.count(t.var) != 0;
}

// A distinct count of zero means the catalog has no information for a
// column that evidently holds data; assume the documented fallback.
double divisor(uint64_t distinct) {
    return distinct ? double(distinct) : kDistinctFallback;
}

bool shares_bound_var(const Atom& atom, const std::set<std::string>& bound) {
    for (const auto& v : atom.vars())
        if (bound.count(v)) return true;
    return false;
}

}  // namespace

double CostModel::atom_estimate(const Atom& atom, const std::set<std::string>& bound) const {
    double est = 0;
    switch (atom.kind) {
        case Atom::Kind::Object: {
            est = double(cat_.object_count);
            if (term_bound(atom.cols[0], bound)) est /= divisor(cat_.object_count);
            break;
        }
        case Atom::Kind::Label: {
            const query::Term& label = atom.cols[1];
            if (!label.is_var) {
                auto it = cat_.objects_by_label.find(label.constant.raw);
                est = it == cat_.objects_by_label.end() ? 0.0 : double(it->second);
            } else {
                est = double(cat_.label_pair_count);
                if (term_bound(label, bound)) est /= divisor(cat_.distinct_labels);
            }
            if (term_bound(atom.cols[0], bound)) est /= divisor(cat_.distinct_label_objects);
            break;
        }
        case Atom::Kind::Prop: {
            const query::Term& key = atom.cols[1];
            uint64_t distinct_values = 0;
            if (!key.is_var) {
                auto it = cat_.props_by_key.find(key.constant.raw);
                est = it == cat_.props_by_key.end() ? 0.0 : double(it->second.count);
                if (it != cat_.props_by_key.end()) distinct_values = it->second.distinct_values;
            } else {
                est = double(cat_.prop_pair_count);
                if (term_bound(key, bound)) est /= divisor(cat_.distinct_prop_keys);
            }
            if (term_bound(atom.cols[0], bound)) est /= divisor(cat_.distinct_prop_objects);
            if (term_bound(atom.cols[2], bound)) est /= divisor(distinct_values);
            break;
        }
        case Atom::Kind::Edge: {
            const query::Term& type = atom.cols[1];
            if (!type.is_var) {
                auto it = cat_.edges_by_type.find(type.constant.raw);
                est = it == cat_.edges_by_type.end() ? 0.0 : double(it->second);
            } else {
                est = double(cat_.edge_count);
                if (term_bound(type, bound)) est /= divisor(cat_.distinct_types);
            }
            if (term_bound(atom.cols[0], bound)) est /= divisor(cat_.distinct_sources);
            if (term_bound(atom.cols[2], bound)) est /= divisor(cat_.distinct_targets);
            if (term_bound(atom.cols[3], bound)) est /= divisor(cat_.edge_count);
            break;
        }
        case Atom::Kind::Path: {
            // Paths are never join-ordered; a nominal relation-sized figure.
            est = double(cat_.edge_count);
            break;
        }
    }
    if (!(est >= 0.0) || !std::isfinite(est)) est = 0.0;
    return est;
}

double CostModel::order_cost(const std::vector<Atom>& atoms,
                             const std::vector<std::size_t>& order,
                             const std::set<std::string>& initial) const {
    double total = 0.0, card = 1.0;
    std::set<std::string> bound = initial;
    for (std::size_t idx : order) {
        const Atom& atom = atoms[idx];
        double after = card * atom_estimate(atom, bound);
        auto vars = atom.vars();
        bool connected = bound.empty() || vars.empty() || shares_bound_var(atom, bound);
        total += connected ? after : after * kCrossPenalty;
        card = after;
        for (auto& v : vars) bound.insert(v);
    }
    return total;
}

std::vector<std::size_t> plan_greedy(const std::vector<Atom>& atoms, const Catalog& catalog,
                                     const std::set<std::string>& initial) {
    CostModel model(catalog);
    std::vector<std::size_t> order;
    std::vector<bool> used(atoms.size(), false);
    std::set<std::string> bound = initial;
    for (std::size_t step = 0; step < atoms.size(); ++step) {
        std::size_t pick = atoms.size();
        double best = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (used[i]) continue;
            auto vars = atoms[i].vars();
            bool connected = bound.empty() || vars.empty() || shares_bound_var(atoms[i], bound);
            double score = model.atom_estimate(atoms[i], bound) * (connected ? 1.0 : kCrossPenalty);
            if (pick == atoms.size() || score < best) {
                pick = i;
                best = score;
            }
        }
        used[pick] = true;
        order.push_back(pick);
        for (auto& v : atoms[pick].vars()) bound.insert(v);
    }
    return order;
}

std::vector<std::size_t> plan_selinger(const std::vector<Atom>& atoms, const Catalog& catalog,
                                       const std::set<std::string>& initial) {
    CostModel model(catalog);
    std::size_t n = atoms.size();
    if (n == 0) return {};
    std::size_t full = (std::size_t(1) << n) - 1;
    std::vector<double> best_cost(full + 1, 0);
    std::vector<std::vector<std::size_t>> best_order(full + 1);
    for (std::size_t s = 1; s <= full; ++s) {
        bool first = true;
        for (std::size_t a = 0; a < n; ++a) {
            if (!(s & (std::size_t(1) << a))) continue;
            std::size_t prev = s ^ (std::size_t(1) << a);
            std::vector<std::size_t> candidate = best_order[prev];
            candidate.push_back(a);
            double cost = model.order_cost(atoms, candidate, initial);
            if (first || cost < best_cost[s] ||
                (cost == best_cost[s] && candidate < best_order[s])) {
                best_cost[s] = cost;
                best_order[s] = std::move(candidate);
                first = false;
            }
        }
    }
    // The subset recurrence can miss an order whose cheaper prefix carries a
    // larger running cardinality; keeping the greedy order as a candidate
    // guarantees the chosen plan never scores worse than greedy's.
    std::vector<std::size_t> greedy = plan_greedy(atoms, catalog, initial);
    if (model.order_cost(atoms, greedy, initial) < best_cost[full]) return greedy;
    return best_order[full];
}

std::vector<std::size_t> plan_join_order(const std::vector<Atom>& atoms, const Catalog& catalog,
                                         const std::set<std::string>& initial) {
    if (atoms.size() <= kSelingerLimit) return plan_selinger(atoms, catalog, initial);
    return plan_greedy(atoms, catalog, initial);
}

}  // namespace mdb::plan
