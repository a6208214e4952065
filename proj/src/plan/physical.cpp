#include "mdb/plan/physical.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "mdb/core/errors.hpp"
#include "mdb/exec/render.hpp"
#include "mdb/path/extend.hpp"

namespace mdb::plan {

namespace {

// One stored permutation of an atom relation: tree column i is fed by atom
// column src[i].
struct Perm {
    TreeId tree;
    std::array<uint8_t, 4> src;
    uint8_t arity;
};

const std::vector<Perm>& perms_for(Atom::Kind kind) {
    static const std::vector<Perm> edge{
        {TreeId::DgStye, {0, 2, 1, 3}, 4},
        {TreeId::DgTyse, {2, 1, 0, 3}, 4},
        {TreeId::DgYste, {1, 0, 2, 3}, 4},
        {TreeId::DgYtse, {1, 2, 0, 3}, 4},
    };
    static const std::vector<Perm> label{
        {TreeId::LabelsOL, {0, 1, 0, 0}, 2},
        {TreeId::LabelsLO, {1, 0, 0, 0}, 2},
    };
    static const std::vector<Perm> prop{
        {TreeId::PropsOPV, {0, 1, 2, 0}, 3},
        {TreeId::PropsPVO, {1, 2, 0, 0}, 3},
    };
    static const std::vector<Perm> object{
        {TreeId::Objects, {0, 0, 0, 0}, 1},
    };
    static const std::vector<Perm> none{};
    switch (kind) {
        case Atom::Kind::Edge: return edge;
        case Atom::Kind::Label: return label;
        case Atom::Kind::Prop: return prop;
        case Atom::Kind::Object: return object;
        case Atom::Kind::Path: return none;
    }
    return none;
}

const char* tree_name(TreeId t) {
    switch (t) {
        case TreeId::Objects: return "Objects";
        case TreeId::DgStye: return "DgStye";
        case TreeId::DgTyse: return "DgTyse";
        case TreeId::DgYste: return "DgYste";
        case TreeId::DgYtse: return "DgYtse";
        case TreeId::LabelsOL: return "LabelsOL";
        case TreeId::LabelsLO: return "LabelsLO";
        case TreeId::PropsOPV: return "PropsOPV";
        case TreeId::PropsPVO: return "PropsPVO";
    }
    return "?";
}

bool term_fixed(const query::Term& t, const std::set<std::string>& bound) {
    return !t.is_var || bound.count(t.var) != 0;
}

exec::ScanSpec spec_from(const Atom& atom, const Perm& p) {
    exec::ScanSpec spec;
    spec.tree = p.tree;
    for (uint8_t i = 0; i < p.arity; ++i) spec.cols.push_back(atom.cols[p.src[i]]);
    return spec;
}

// Permutation with the longest run of leading columns fixed by constants and
// bound variables; ties keep table order.
const Perm& pick_scan_perm(const Atom& atom, const std::set<std::string>& bound) {
    const auto& perms = perms_for(atom.kind);
    const Perm* best = &perms[0];
    std::size_t best_len = 0;
    bool first = true;
    for (const auto& p : perms) {
        std::size_t len = 0;
        while (len < p.arity && term_fixed(atom.cols[p.src[len]], bound)) ++len;
        if (first || len > best_len) {
            best = &p;
            best_len = len;
            first = false;
        }
    }
    return *best;
}

std::string spec_text(const exec::ScanSpec& spec, const Fmt& fmt) {
    std::string out = tree_name(spec.tree);
    out += " [";
    for (std::size_t i = 0; i < spec.cols.size(); ++i) {
        if (i) out += ", ";
        out += term_text(spec.cols[i], fmt);
    }
    out += "]";
    return out;
}

}  // namespace

// ---- Leapfrog layout selection -------------------------------------------

std::optional<LeapfrogChoice> leapfrog_plan(const MatchNode& block, const Catalog& catalog,
                                            const std::set<std::string>& bound) {
    if (!block.paths.empty()) return std::nullopt;
    std::set<std::string> fixed = bound;
    for (const auto& [var, value] : block.assignments) fixed.insert(var);

    struct AtomState {
        const Atom* atom;
        std::vector<const Perm*> viable;
        std::vector<std::vector<std::string>> varseq;  // parallel to the full perm table
        std::size_t placed = 0;                        // free vars already in the order
    };
    std::vector<AtomState> states;
    std::set<std::string> free_vars;
    for (const auto& atom : block.atoms) {
        AtomState st;
        st.atom = &atom;
        std::set<std::string> seen;
        for (const auto& t : atom.cols) {
            if (!t.is_var || fixed.count(t.var)) continue;
            if (!seen.insert(t.var).second) return std::nullopt;  // repeated free variable
            free_vars.insert(t.var);
        }
        for (const auto& p : perms_for(atom.kind)) {
            std::vector<std::string> seq;
            for (uint8_t i = 0; i < p.arity; ++i) {
                const auto& t = atom.cols[p.src[i]];
                if (t.is_var && !fixed.count(t.var)) seq.push_back(t.var);
            }
            st.viable.push_back(&p);
            st.varseq.push_back(std::move(seq));
        }
        states.push_back(std::move(st));
    }

    CostModel model(catalog);
    auto var_rank = [&](const std::string& v) {
        double cost = 0;
        std::size_t rels = 0;
        bool first = true;
        for (const auto& st : states) {
            bool has = false;
            for (const auto& t : st.atom->cols) has |= t.is_var && t.var == v;
            if (!has) continue;
            ++rels;
            double e = model.atom_estimate(*st.atom, fixed);
            if (first || e < cost) {
                cost = e;
                first = false;
            }
        }
        return std::make_pair(cost, rels);
    };

    std::vector<std::string> order;
    std::set<std::string> chosen;
    while (chosen.size() < free_vars.size()) {
        std::string best;
        bool best_connected = false;
        std::pair<double, std::size_t> best_key{0, 0};
        for (const auto& v : free_vars) {
            if (chosen.count(v)) continue;
            // Selectable: every atom with v free can take v as its next
            // variable under some still-viable permutation.
            bool selectable = true;
            bool connected = chosen.empty();
            for (const auto& st : states) {
                bool has_free = false;
                bool has_chosen = false;
                for (const auto& t : st.atom->cols) {
                    if (!t.is_var) continue;
                    has_free |= t.var == v && !fixed.count(t.var);
                    has_chosen |= chosen.count(t.var) != 0;
                }
                if (has_free && has_chosen) connected = true;
                if (!has_free) continue;
                bool can = false;
                for (std::size_t i = 0; i < st.viable.size() && !can; ++i) {
                    if (!st.viable[i]) continue;
                    can = st.varseq[i].size() > st.placed && st.varseq[i][st.placed] == v;
                }
                selectable &= can;
            }
            if (!selectable) continue;
            auto key = var_rank(v);
            // Prefer connected variables; then the smallest containing
            // relation, more containing relations, and the name.
            bool better;
            if (best.empty()) {
                better = true;
            } else if (connected != best_connected) {
                better = connected;
            } else if (key.first != best_key.first) {
                better = key.first < best_key.first;
            } else if (key.second != best_key.second) {
                better = key.second > best_key.second;
            } else {
                better = v < best;
            }
            if (better) {
                best = v;
                best_connected = connected;
                best_key = key;
            }
        }
        if (best.empty()) return std::nullopt;
        order.push_back(best);
        chosen.insert(best);
        for (auto& st : states) {
            bool has_free = false;
            for (const auto& t : st.atom->cols) has_free |= t.is_var && t.var == best;
            if (!has_free || fixed.count(best)) continue;
            for (std::size_t i = 0; i < st.viable.size(); ++i) {
                if (!st.viable[i]) continue;
                if (st.varseq[i].size() <= st.placed || st.varseq[i][st.placed] != best) {
                    st.viable[i] = nullptr;
                }
            }
            ++st.placed;
        }
    }

    LeapfrogChoice choice;
    choice.order = std::move(order);
    for (const auto& st : states) {
        const Perm* pick = nullptr;
        std::size_t pick_lead = 0;
        for (std::size_t i = 0; i < st.viable.size(); ++i) {
            const Perm* p = st.viable[i];
            if (!p) continue;
            std::size_t lead = 0;
            while (lead < p->arity && term_fixed(st.atom->cols[p->src[lead]], fixed)) ++lead;
            if (!pick || lead > pick_lead) {
                pick = p;
                pick_lead = lead;
            }
        }
        if (!pick) return std::nullopt;
        choice.atoms.push_back(spec_from(*st.atom, *pick));
    }
    return choice;
}

bool leapfrog_applicable(const MatchNode& block, const Catalog& catalog,
                         const std::set<std::string>& bound) {
    return leapfrog_plan(block, catalog, bound).has_value();
}

std::optional<std::vector<std::string>> leapfrog_variable_order(
    const MatchNode& block, const Catalog& catalog, const std::set<std::string>& bound) {
    auto choice = leapfrog_plan(block, catalog, bound);
    if (!choice) return std::nullopt;
    return std::move(choice->order);
}

// ---- Emission ------------------------------------------------------------

namespace {

struct Compiled {
    exec::OperatorPtr op;
    std::vector<std::string> lines;  // own subtree, relative indentation
};

void absorb(std::vector<std::string>& out, std::vector<std::string> child) {
    for (auto& line : child) out.push_back("  " + std::move(line));
}

Compiled compile_match(const MatchNode& block, const std::set<std::string>& bound, Database& db,
                       exec::ExecContext& ctx, Strategy strategy, const Fmt& fmt) {
    Compiled seed;
    seed.op = std::make_unique<exec::Seed>(block.assignments);
    seed.lines.push_back("Seed");
    for (const auto& [var, value] : block.assignments) {
        seed.lines.push_back("  assign " + var + " = " + fmt(value));
    }

    std::set<std::string> avail = bound;
    for (const auto& [var, value] : block.assignments) avail.insert(var);

    Compiled result;
    std::optional<LeapfrogChoice> lf;
    if (strategy != Strategy::NestedLoop) {
        lf = leapfrog_plan(block, db.catalog(), bound);
        if (strategy == Strategy::Leapfrog && !lf) {
            throw StrategyUnavailableError(
                "the multiway join cannot serve this pattern block (path pattern, repeated "
                "variable, or no variable order fits the stored permutations)");
        }
    }
    if (lf) {
        std::string head = "Leapfrog order=[";
        for (std::size_t i = 0; i < lf->order.size(); ++i) {
            if (i) head += ", ";
            head += lf->order[i];
        }
        head += "]";
        result.lines.push_back(std::move(head));
        absorb(result.lines, std::move(seed.lines));
        for (const auto& spec : lf->atoms) {
            result.lines.push_back("  Trie " + spec_text(spec, fmt));
        }
        result.op = std::make_unique<exec::LeapfrogJoin>(ctx, std::move(seed.op), lf->atoms,
                                                         lf->order);
        for (const auto& v : lf->order) avail.insert(v);
    } else {
        auto order = plan_join_order(block.atoms, db.catalog(), avail);
        result.lines.push_back("NestedLoop");
        absorb(result.lines, std::move(seed.lines));
        result.op = std::move(seed.op);
        for (std::size_t idx : order) {
            const Atom& atom = block.atoms[idx];
            const Perm& perm = pick_scan_perm(atom, avail);
            exec::ScanSpec spec = spec_from(atom, perm);
            result.lines.push_back("  Scan " + spec_text(spec, fmt));
            result.op = std::make_unique<exec::IndexNestedLoop>(ctx, std::move(result.op), spec);
            for (const auto& v : atom.vars()) avail.insert(v);
        }
    }

    // Path patterns run last, in query order, anchored at whichever endpoint
    // is fixed by then; a path with two free endpoints gets a generator scan
    // over all objects for its source.
    for (const Atom& p : block.paths) {
        const query::Term& src = p.cols[0];
        const query::Term& tgt = p.cols[1];
        path::Anchor anchor = path::Anchor::Source;
        if (!term_fixed(src, avail)) {
            if (term_fixed(tgt, avail)) {
                anchor = path::Anchor::Target;
            } else {
                exec::ScanSpec gen;
                gen.tree = TreeId::Objects;
                gen.cols = {src};
                Compiled wrapped;
                wrapped.lines.push_back("ObjectScan " + term_text(src, fmt));
                absorb(wrapped.lines, std::move(result.lines));
                wrapped.op =
                    std::make_unique<exec::IndexNestedLoop>(ctx, std::move(result.op), gen);
                result = std::move(wrapped);
                avail.insert(src.var);
            }
        }
        Compiled wrapped;
        wrapped.lines.push_back(
            "PathExtend " + atom_text(p, fmt) +
            (anchor == path::Anchor::Source ? " anchor=source" : " anchor=target"));
        absorb(wrapped.lines, std::move(result.lines));
        wrapped.op = std::make_unique<path::PathExtend>(ctx, std::move(result.op), *p.path, src,
                                                        tgt, anchor);
        result = std::move(wrapped);
        for (const auto& v : p.vars()) avail.insert(v);
    }
    return result;
}

Compiled compile_pattern(const PatternNode& node, const std::set<std::string>& bound,
                         Database& db, exec::ExecContext& ctx, Strategy strategy,
                         const Fmt& fmt) {
    if (node.kind == PatternNode::Kind::Match) {
        return compile_match(node.match, bound, db, ctx, strategy, fmt);
    }
    Compiled left = compile_pattern(*node.left, bound, db, ctx, strategy, fmt);
    std::set<std::string> right_bound = bound;
    for (const auto& v : node.left->vars()) right_bound.insert(v);
    Compiled right = compile_pattern(*node.right, right_bound, db, ctx, strategy, fmt);
    Compiled out;
    out.lines.push_back("OptionalJoin");
    absorb(out.lines, std::move(left.lines));
    absorb(out.lines, std::move(right.lines));
    out.op = std::make_unique<exec::OptionalJoin>(ctx, std::move(left.op), std::move(right.op));
    return out;
}

}  // namespace

PhysicalPlan emit_physical(LogicalPlan logical, Database& db, Strategy strategy) {
    PhysicalPlan plan;
    plan.ctx = std::make_unique<exec::ExecContext>(db);
    Fmt fmt = [&db](ObjectId id) { return exec::render_value(id, db); };

    Compiled body = compile_pattern(*logical.pattern, {}, db, *plan.ctx, strategy, fmt);
    if (logical.where) {
        Compiled wrapped;
        wrapped.lines.push_back("Filter " + condition_text(*logical.where, fmt));
        absorb(wrapped.lines, std::move(body.lines));
        wrapped.op = std::make_unique<exec::Filter>(*plan.ctx, std::move(body.op),
                                                    logical.where.get());
        body = std::move(wrapped);
    }

    plan.modifiers.select = logical.select;
    plan.modifiers.order = logical.order;
    plan.modifiers.limit = logical.limit;

    std::vector<std::string> lines;
    std::string head = "Project ";
    if (logical.select.empty()) {
        head += "*";
    } else {
        for (std::size_t i = 0; i < logical.select.size(); ++i) {
            if (i) head += ", ";
            head += logical.select[i].text();
        }
    }
    if (logical.limit > 0) head += " limit " + std::to_string(logical.limit);
    lines.push_back(std::move(head));
    std::vector<std::string> inner;
    if (!logical.order.empty()) {
        std::string sort = "OrderBy ";
        for (std::size_t i = 0; i < logical.order.size(); ++i) {
            if (i) sort += ", ";
            sort += logical.order[i].element.text();
            sort += logical.order[i].descending ? " desc" : " asc";
        }
        inner.push_back(std::move(sort));
        absorb(inner, std::move(body.lines));
    } else {
        inner = std::move(body.lines);
    }
    absorb(lines, std::move(inner));
    plan.text.clear();
    for (const auto& line : lines) {
        plan.text += line;
        plan.text += '\n';
    }

    plan.root = std::move(body.op);
    plan.logical = std::move(logical);
    return plan;
}

PhysicalPlan make_plan(const query::FormalQuery& q, Database& db, Strategy strategy) {
    LogicalPlan logical = build_logical(q);
    simplify(logical, &db.names());
    return emit_physical(std::move(logical), db, strategy);
}

}  // namespace mdb::plan
