#include "mdb/algebra/eval.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

#include "mdb/core/errors.hpp"
#include "mdb/core/order.hpp"
#include "mdb/query/desugar.hpp"

namespace mdb::algebra {

// ---- Mapping-set operators ----------------------------------------------

MappingSet join(const MappingSet& a, const MappingSet& b) {
    MappingSet out;
    for (const auto& ma : a)
        for (const auto& mb : b)
            if (compatible(ma, mb)) out.push_back(merge(ma, mb));
    return canonicalize(std::move(out));
}

MappingSet union_(const MappingSet& a, const MappingSet& b) {
    MappingSet out = a;
    out.insert(out.end(), b.begin(), b.end());
    return canonicalize(std::move(out));
}

MappingSet difference(const MappingSet& a, const MappingSet& b) {
    MappingSet out;
    for (const auto& ma : a) {
        bool extended = false;
        for (const auto& mb : b)
            if (compatible(ma, mb)) {
                extended = true;
                break;
            }
        if (!extended) out.push_back(ma);
    }
    return canonicalize(std::move(out));
}

MappingSet left_outer_join(const MappingSet& a, const MappingSet& b) {
    return union_(join(a, b), difference(a, b));
}

// ---- Pattern evaluation --------------------------------------------------

namespace {

// Unifies a term with a concrete object under mu. A new binding is recorded
// in `undo` so the caller can backtrack.
bool unify(Mapping& mu, const query::Term& t, ObjectId v, std::vector<std::string>& undo) {
    if (!t.is_var) return t.constant == v;
    auto it = mu.find(t.var);
    if (it != mu.end()) return it->second == v;
    mu.emplace(t.var, v);
    undo.push_back(t.var);
    return true;
}

// Depth-first enumeration of every homomorphism from the non-path atoms into
// the graph, one atom at a time in a fixed linear order.
class BgpSearch {
public:
    BgpSearch(const query::BasicPattern& p, const ReferenceGraph& g) : p_(p), g_(g) {}

    void run(const std::function<void(const Mapping&)>& sink) {
        sink_ = &sink;
        step(0);
    }

private:
    std::size_t total() const {
        return p_.objects.size() + p_.labels.size() + p_.props.size() + p_.edges.size();
    }

    void step(std::size_t i) {
        if (i == total()) {
            (*sink_)(mu_);
            return;
        }
        std::size_t k = i;
        if (k < p_.objects.size()) return object_atom(p_.objects[k], i);
        k -= p_.objects.size();
        if (k < p_.labels.size()) return label_atom(p_.labels[k], i);
        k -= p_.labels.size();
        if (k < p_.props.size()) return prop_atom(p_.props[k], i);
        k -= p_.props.size();
        edge_atom(p_.edges[k], i);
    }

    template <typename Fn>
    void attempt(std::size_t i, Fn&& try_bind) {
        std::vector<std::string> undo;
        if (try_bind(undo)) step(i + 1);
        for (const auto& v : undo) mu_.erase(v);
    }

    void object_atom(const query::ObjectAtom& a, std::size_t i) {
        for (ObjectId o : g_.objects())
            attempt(i, [&](auto& undo) { return unify(mu_, a.object, o, undo); });
    }

    void label_atom(const query::LabelAtom& a, std::size_t i) {
        for (const auto& [object, label] : g_.labels()) {
            if (label != a.label) continue;
            attempt(i, [&](auto& undo) { return unify(mu_, a.object, object, undo); });
        }
    }

    void prop_atom(const query::PropAtom& a, std::size_t i) {
        for (const auto& [object_key, value] : g_.props()) {
            if (object_key.second != a.key) continue;
            attempt(i, [&](auto& undo) {
                return unify(mu_, a.object, object_key.first, undo) &&
                       unify(mu_, a.value, value, undo);
            });
        }
    }

    void edge_atom(const query::EdgeRel& a, std::size_t i) {
        for (const auto& e : g_.edges()) {
            attempt(i, [&](auto& undo) {
                return unify(mu_, a.source, e.source, undo) && unify(mu_, a.type, e.type, undo) &&
                       unify(mu_, a.target, e.target, undo) && unify(mu_, a.edge, e.eid, undo);
            });
        }
    }

    const query::BasicPattern& p_;
    const ReferenceGraph& g_;
    Mapping mu_;
    const std::function<void(const Mapping&)>* sink_ = nullptr;
};

Mapping project(const Mapping& mu, const std::set<std::string>& V) {
    Mapping out;
    for (const auto& v : V) {
        auto it = mu.find(v);
        if (it != mu.end()) out.emplace(*it);
    }
    return out;
}

}  // namespace

MappingSet eval_bgp(const std::set<std::string>& V, const query::BasicPattern& pattern,
                    const ReferenceGraph& g) {
    MappingSet out;
    BgpSearch search(pattern, g);
    search.run([&](const Mapping& mu) { out.push_back(project(mu, V)); });
    return canonicalize(std::move(out));
}

MappingSet eval_navigational(const std::set<std::string>& V, const query::BasicPattern& pattern,
                             const ReferenceGraph& g, WitnessTable& witnesses) {
    // Full mappings over the basic part first.
    std::set<std::string> basic_vars;
    auto note = [&](const query::Term& t) {
        if (t.is_var) basic_vars.insert(t.var);
    };
    for (const auto& a : pattern.objects) note(a.object);
    for (const auto& a : pattern.labels) note(a.object);
    for (const auto& a : pattern.props) {
        note(a.object);
        note(a.value);
    }
    for (const auto& e : pattern.edges) {
        note(e.source);
        note(e.type);
        note(e.target);
        note(e.edge);
    }
    MappingSet omega = eval_bgp(basic_vars, pattern, g);

    // Extend by each path atom: endpoints join against the pair relation,
    // a named path variable binds the canonical witness.
    for (const auto& p : pattern.paths) {
        PairSet pairs = eval_rpq(*p.rpq, g);
        std::map<ObjectPair, ObjectId> interned;
        auto witness_id = [&](const ObjectPair& pr) {
            auto it = interned.find(pr);
            if (it != interned.end()) return it->second;
            auto w = canonical_witness(*p.rpq, pr.first, pr.second, g);
            ObjectId id = witnesses.intern(std::move(*w));
            interned.emplace(pr, id);
            return id;
        };
        MappingSet next;
        for (const auto& mu : omega) {
            for (const auto& pr : pairs) {
                Mapping m2 = mu;
                std::vector<std::string> undo;
                if (!unify(m2, p.source, pr.first, undo)) continue;
                if (!unify(m2, p.target, pr.second, undo)) continue;
                if (p.path_var) {
                    ObjectId id = witness_id(pr);
                    auto it = m2.find(*p.path_var);
                    if (it != m2.end()) {
                        if (it->second != id) continue;
                    } else {
                        m2.emplace(*p.path_var, id);
                    }
                }
                next.push_back(std::move(m2));
            }
        }
        omega = canonicalize(std::move(next));
    }

    MappingSet out;
    for (const auto& mu : omega) out.push_back(project(mu, V));
    return canonicalize(std::move(out));
}

// ---- Conditions ----------------------------------------------------------

namespace {

std::optional<ObjectId> bound(const Mapping& mu, const std::string& var) {
    auto it = mu.find(var);
    if (it == mu.end()) return std::nullopt;
    return it->second;
}

std::optional<ObjectId> prop_of(const Mapping& mu, const std::string& var, const std::string& key,
                                const ReferenceGraph& g, const ValueDict& dict) {
    auto object = bound(mu, var);
    if (!object) return std::nullopt;
    auto key_id = encode_string_readonly(key, dict);
    if (!key_id) return std::nullopt;
    return g.prop(*object, *key_id);
}

bool cmp_holds(query::Cmp op, int c) {
    switch (op) {
        case query::Cmp::Eq: return c == 0;
        case query::Cmp::Ne: return c != 0;
        case query::Cmp::Lt: return c < 0;
        case query::Cmp::Le: return c <= 0;
        case query::Cmp::Gt: return c > 0;
        case query::Cmp::Ge: return c >= 0;
    }
    return false;
}

}  // namespace

bool eval_condition(const Mapping& mu, const query::Condition& c, const PropProbe& prop,
                    const ValueDict& dict) {
    using K = query::Condition::Kind;
    auto prop_value = [&](const std::string& var, const std::string& key) -> std::optional<ObjectId> {
        auto object = bound(mu, var);
        if (!object) return std::nullopt;
        return prop(*object, key);
    };
    switch (c.kind) {
        case K::True:
            return true;
        case K::VarEqVar: {
            auto a = bound(mu, c.left_var), b = bound(mu, c.right_var);
            return a && b && *a == *b;
        }
        case K::VarEqConst: {
            auto a = bound(mu, c.left_var);
            return a && *a == c.constant;
        }
        case K::PropCmpProp: {
            auto a = prop_value(c.left_var, c.left_key);
            auto b = prop_value(c.right_var, c.right_key);
            if (!a || !b) return false;
            return cmp_holds(c.op, value_compare(*a, *b, dict));
        }
        case K::PropCmpConst: {
            auto a = prop_value(c.left_var, c.left_key);
            if (!a) return false;
            return cmp_holds(c.op, value_compare(*a, c.constant, dict));
        }
        case K::Not:
            return !eval_condition(mu, *c.left, prop, dict);
        case K::And:
            return eval_condition(mu, *c.left, prop, dict) &&
                   eval_condition(mu, *c.right, prop, dict);
        case K::Or:
            return eval_condition(mu, *c.left, prop, dict) ||
                   eval_condition(mu, *c.right, prop, dict);
    }
    return false;
}

bool eval_condition(const Mapping& mu, const query::Condition& c, const ReferenceGraph& g,
                    const ValueDict& dict) {
    PropProbe prop = [&](ObjectId object, const std::string& key) -> std::optional<ObjectId> {
        auto key_id = encode_string_readonly(key, dict);
        if (!key_id) return std::nullopt;
        return g.prop(object, *key_id);
    };
    return eval_condition(mu, c, prop, dict);
}

// ---- Modifiers -----------------------------------------------------------

namespace {

int witness_content_compare(const PathWitness& a, const PathWitness& b) {
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size() ? -1 : 1;
    if (a.edges != b.edges) return a.edges < b.edges ? -1 : 1;
    if (a.objects != b.objects) return a.objects < b.objects ? -1 : 1;
    return 0;
}

std::optional<ObjectId> element_value(const Mapping& mu, const query::SelectionElement& e,
                                      const ReferenceGraph& g, const ValueDict& dict) {
    if (!e.key) return bound(mu, e.var);
    return prop_of(mu, e.var, *e.key, g, dict);
}

}  // namespace

int solution_value_compare(const std::optional<ObjectId>& a, const std::optional<ObjectId>& b,
                           const WitnessTable& witnesses, const ValueDict& dict) {
    if (!a && !b) return 0;
    if (!a) return -1;
    if (!b) return 1;
    const PathWitness* wa = witnesses.find(*a);
    const PathWitness* wb = witnesses.find(*b);
    if (wa && wb) return witness_content_compare(*wa, *wb);
    return value_compare(*a, *b, dict);
}

SolutionSequence apply_modifiers(const MappingSet& omega,
                                 const std::vector<query::SelectionElement>& select,
                                 const std::vector<query::OrderKey>& order, uint64_t limit,
                                 const ReferenceGraph& g, const ValueDict& dict,
                                 WitnessTable witnesses) {
    struct Item {
        Row row;
        std::vector<std::optional<ObjectId>> keys;
    };
    std::vector<Item> items;
    items.reserve(omega.size());
    for (const auto& mu : omega) {
        Item item;
        for (const auto& e : select) item.row.values.push_back(element_value(mu, e, g, dict));
        for (const auto& k : order) item.keys.push_back(element_value(mu, k.element, g, dict));
        items.push_back(std::move(item));
    }
    auto row_compare = [&](const Row& x, const Row& y) {
        for (std::size_t i = 0; i < x.values.size(); ++i) {
            int c = solution_value_compare(x.values[i], y.values[i], witnesses, dict);
            if (c != 0) return c;
        }
        return 0;
    };
    std::stable_sort(items.begin(), items.end(), [&](const Item& x, const Item& y) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            int c = solution_value_compare(x.keys[i], y.keys[i], witnesses, dict);
            if (order[i].descending) c = -c;
            if (c != 0) return c < 0;
        }
        return row_compare(x.row, y.row) < 0;
    });
    if (limit > 0 && items.size() > limit) items.resize(limit);
    SolutionSequence out;
    out.columns = select;
    out.rows.reserve(items.size());
    for (auto& item : items) out.rows.push_back(std::move(item.row));
    out.witnesses = std::move(witnesses);
    return out;
}

// ---- Whole-query oracle --------------------------------------------------

namespace {

MappingSet eval_relational(const query::RelationalPattern& r, const ReferenceGraph& g,
                           WitnessTable& witnesses) {
    using K = query::RelationalPattern::Kind;
    switch (r.kind) {
        case K::Basic: {
            std::set<std::string> vars;
            query::collect_vars(r.basic, vars);
            return eval_navigational(vars, r.basic, g, witnesses);
        }
        case K::And:
            return join(eval_relational(*r.left, g, witnesses),
                        eval_relational(*r.right, g, witnesses));
        case K::Opt:
            return left_outer_join(eval_relational(*r.left, g, witnesses),
                                   eval_relational(*r.right, g, witnesses));
    }
    return {};
}

}  // namespace

SolutionSequence oracle_evaluate(const query::FormalQuery& q, const ReferenceGraph& g,
                                 const ValueDict& dict) {
    query::ensure_well_designed(q);
    WitnessTable witnesses;
    MappingSet omega = eval_relational(*q.pattern, g, witnesses);
    MappingSet kept;
    for (const auto& mu : omega)
        if (eval_condition(mu, *q.condition, g, dict)) kept.push_back(mu);
    return apply_modifiers(kept, q.select, q.order, q.limit, g, dict, std::move(witnesses));
}

}  // namespace mdb::algebra
