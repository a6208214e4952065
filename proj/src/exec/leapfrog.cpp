#include "mdb/exec/leapfrog.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

#include "mdb/core/errors.hpp"

namespace mdb::exec {

// ---- Cursor --------------------------------------------------------------

// Seeks forward to the first record with the pinned prefix and column `col`
// >= target; false when the pinned subtree has no such record.
bool LeapfrogJoin::Cursor::seek_at(uint32_t col, ObjectId target) {
    BPlusTree::Record want{};
    for (uint32_t i = 0; i < col; ++i) want[i] = pins[i];
    want[col] = target;
    if (!it) {
        it.emplace(tree->lower_bound(want));
    } else {
        it->seek(want);
    }
    if (!it->valid()) return false;
    auto record = it->record();
    for (uint32_t i = 0; i < col; ++i) {
        if (record[i] != pins[i]) return false;
    }
    return true;
}

bool LeapfrogJoin::Cursor::first_at(uint32_t col) { return seek_at(col, ObjectId{}); }

bool LeapfrogJoin::Cursor::next_at(uint32_t col) {
    ObjectId k = key(col);
    if (k.raw == std::numeric_limits<uint64_t>::max()) return false;
    ObjectId bump;
    bump.raw = k.raw + 1;
    return seek_at(col, bump);
}

ObjectId LeapfrogJoin::Cursor::key(uint32_t col) const { return it->record()[col]; }

void LeapfrogJoin::Cursor::push(ObjectId v) { pins[depth++] = v; }

void LeapfrogJoin::Cursor::pop(uint32_t to_depth) { depth = to_depth; }

// ---- Construction --------------------------------------------------------

LeapfrogJoin::LeapfrogJoin(ExecContext& ctx, OperatorPtr outer, std::vector<ScanSpec> atoms,
                           std::vector<std::string> var_order)
    : ctx_(&ctx), outer_(std::move(outer)), atoms_(std::move(atoms)), order_(std::move(var_order)) {
    auto position = [this](const std::string& v) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < order_.size(); ++i) {
            if (order_[i] == v) return i;
        }
        return std::nullopt;
    };
    std::set<std::string> covered;
    for (const auto& atom : atoms_) {
        std::optional<std::size_t> last;
        for (const auto& term : atom.cols) {
            if (!term.is_var) continue;
            auto pos = position(term.var);
            if (!pos) continue;  // bound by the outer mapping at open time
            covered.insert(term.var);
            if (last && *pos <= *last) {
                throw PermutationUnavailableError(
                    "columns of a join atom do not follow the variable order at ?" + term.var);
            }
            last = *pos;
        }
    }
    for (const auto& v : order_) {
        if (!covered.count(v)) {
            throw PermutationUnavailableError("join variable ?" + v +
                                              " is not covered by any atom");
        }
    }
}

// ---- Per-outer-row setup -------------------------------------------------

bool LeapfrogJoin::prepare(const algebra::Mapping& parent) {
    cursors_.clear();
    cols_.clear();
    levels_.clear();
    for (const auto& v : order_) levels_.push_back({v, {}, ObjectId{}});
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
        const auto& spec = atoms_[a];
        Cursor cur;
        cur.tree = &ctx_->db->tree(spec.tree);
        cursors_.push_back(std::move(cur));
        std::vector<ColPlan> plan;
        for (uint32_t c = 0; c < spec.cols.size(); ++c) {
            const auto& term = spec.cols[c];
            ColPlan cp;
            if (!term.is_var) {
                cp.fixed = true;
                cp.value = term.constant;
            } else if (auto it = parent.find(term.var); it != parent.end()) {
                cp.fixed = true;
                cp.value = it->second;
            } else {
                cp.fixed = false;
                cp.level = 0;
                bool found = false;
                for (std::size_t j = 0; j < order_.size(); ++j) {
                    if (order_[j] == term.var) {
                        cp.level = j;
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    throw PermutationUnavailableError("join variable ?" + term.var +
                                                      " is neither ordered nor bound");
                }
                levels_[cp.level].parts.push_back({a, c, 0});
            }
            plan.push_back(cp);
        }
        cols_.push_back(std::move(plan));
    }
    // A level can lose all participants when the outer mapping binds its
    // variable; rewrite such levels as fixed columns was already done above,
    // so drop them from the descent.
    std::vector<Level> live;
    for (auto& lvl : levels_) {
        if (!lvl.parts.empty()) live.push_back(std::move(lvl));
    }
    // Renumber the column plans to the surviving levels.
    for (std::size_t j = 0; j < live.size(); ++j) {
        for (auto& part : live[j].parts) {
            cols_[part.atom][part.col].level = j;
        }
    }
    levels_ = std::move(live);
    // Atoms with every column fixed take part in no level; they act as
    // existence filters and are probed once up front.
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
        bool all_fixed = true;
        for (const auto& cp : cols_[a]) all_fixed &= cp.fixed;
        if (all_fixed) {
            if (!advance_cursor_to(a, uint32_t(cols_[a].size()))) return false;
        }
    }
    return true;
}

// Pins the fixed columns of `atom` from the cursor's current depth up to (not
// including) `col`; false when some fixed value is absent under the pins.
bool LeapfrogJoin::advance_cursor_to(std::size_t atom, uint32_t col) {
    auto& cur = cursors_[atom];
    for (uint32_t c = cur.depth; c < col; ++c) {
        const auto& cp = cols_[atom][c];
        if (!cur.seek_at(c, cp.value)) return false;
        if (cur.key(c) != cp.value) return false;
        cur.push(cp.value);
    }
    return true;
}

// ---- Level movement ------------------------------------------------------

bool LeapfrogJoin::enter(std::size_t level) {
    auto& lvl = levels_[level];
    for (auto& part : lvl.parts) part.depth_before = cursors_[part.atom].depth;
    for (auto& part : lvl.parts) {
        if (!advance_cursor_to(part.atom, part.col) || !cursors_[part.atom].first_at(part.col)) {
            leave(level);
            return false;
        }
    }
    if (!align(level)) {
        leave(level);
        return false;
    }
    return true;
}

// Classic leapfrog search: repeatedly seek the smallest cursor to the largest
// key until all participants sit on one value.
bool LeapfrogJoin::align(std::size_t level) {
    auto& lvl = levels_[level];
    for (;;) {
        ObjectId lo = cursors_[lvl.parts[0].atom].key(lvl.parts[0].col);
        ObjectId hi = lo;
        for (const auto& part : lvl.parts) {
            ObjectId k = cursors_[part.atom].key(part.col);
            if (k < lo) lo = k;
            if (hi < k) hi = k;
        }
        if (lo == hi) {
            lvl.key = hi;
            for (const auto& part : lvl.parts) cursors_[part.atom].push(hi);
            return true;
        }
        for (const auto& part : lvl.parts) {
            auto& cur = cursors_[part.atom];
            if (cur.key(part.col) < hi && !cur.seek_at(part.col, hi)) return false;
        }
    }
}

bool LeapfrogJoin::advance(std::size_t level) {
    auto& lvl = levels_[level];
    for (const auto& part : lvl.parts) cursors_[part.atom].pop(part.col);
    if (!cursors_[lvl.parts[0].atom].next_at(lvl.parts[0].col)) return false;
    return align(level);
}

void LeapfrogJoin::leave(std::size_t level) {
    for (const auto& part : levels_[level].parts) {
        cursors_[part.atom].pop(part.depth_before);
    }
}

// ---- Search loop ---------------------------------------------------------

std::optional<algebra::Mapping> LeapfrogJoin::run() {
    if (exhausted_) return std::nullopt;
    const int k = int(levels_.size());
    auto emit = [this]() {
        algebra::Mapping out = *current_;
        for (const auto& lvl : levels_) out[lvl.var] = lvl.key;
        ++ctx_->intermediate_bindings;
        return out;
    };
    int l;
    bool entering;
    if (!started_) {
        started_ = true;
        if (k == 0) {
            // Everything fixed; the probes in prepare() already succeeded.
            exhausted_ = true;
            return emit();
        }
        l = 0;
        entering = true;
    } else {
        l = k - 1;
        entering = false;
    }
    for (;;) {
        bool ok = entering ? enter(std::size_t(l)) : advance(std::size_t(l));
        if (ok) {
            if (l == k - 1) return emit();
            ++l;
            entering = true;
        } else {
            if (!entering) leave(std::size_t(l));
            --l;
            entering = false;
            if (l < 0) {
                exhausted_ = true;
                return std::nullopt;
            }
        }
    }
}

// ---- Operator contract ---------------------------------------------------

void LeapfrogJoin::open(const algebra::Mapping& parent) {
    outer_->open(parent);
    current_.reset();
    started_ = false;
    exhausted_ = true;
}

std::optional<algebra::Mapping> LeapfrogJoin::next() {
    for (;;) {
        if (current_ && !exhausted_) {
            if (auto solution = run()) return solution;
        }
        current_ = outer_->next();
        if (!current_) return std::nullopt;
        exhausted_ = !prepare(*current_);
        started_ = false;
    }
}

void LeapfrogJoin::reset() {
    outer_->reset();
    current_.reset();
    started_ = false;
    exhausted_ = true;
}

}  // namespace mdb::exec
