#include "mdb/exec/operator.hpp"

#include <utility>

namespace mdb::exec {

std::optional<ObjectId> db_prop(Database& db, ObjectId object, const std::string& key) {
    auto key_id = encode_string_readonly(key, db.names());
    if (!key_id) return std::nullopt;
    BPlusTree::Record prefix{object, *key_id, ObjectId{}, ObjectId{}};
    auto it = db.tree(TreeId::PropsOPV).prefix_scan(prefix, 2);
    if (!it.valid()) return std::nullopt;
    return it.record()[2];
}

bool eval_condition_db(const algebra::Mapping& mu, const query::Condition& c, Database& db) {
    algebra::PropProbe prop = [&db](ObjectId object, const std::string& key) {
        return db_prop(db, object, key);
    };
    return algebra::eval_condition(mu, c, prop, db.names());
}

// ---- Seed ----------------------------------------------------------------

Seed::Seed(std::vector<std::pair<std::string, ObjectId>> assignments)
    : assignments_(std::move(assignments)) {}

void Seed::open(const algebra::Mapping& parent) {
    row_ = parent;
    done_ = false;
    for (const auto& [var, value] : assignments_) {
        if (!row_) break;
        auto [it, inserted] = row_->emplace(var, value);
        if (!inserted && it->second != value) row_.reset();
    }
}

std::optional<algebra::Mapping> Seed::next() {
    if (done_) return std::nullopt;
    done_ = true;
    return row_;
}

void Seed::reset() { done_ = false; }

// ---- IndexNestedLoop -----------------------------------------------------

IndexNestedLoop::IndexNestedLoop(ExecContext& ctx, OperatorPtr outer, ScanSpec spec)
    : ctx_(&ctx), outer_(std::move(outer)), spec_(std::move(spec)) {}

void IndexNestedLoop::open(const algebra::Mapping& parent) {
    outer_->open(parent);
    current_.reset();
    it_.reset();
}

// Positions the tree iterator on the first record whose leading fixed columns
// match the outer mapping; fixed columns after the first unfixed one are
// checked record by record instead.
bool IndexNestedLoop::start_scan(const algebra::Mapping& outer) {
    BPlusTree::Record prefix{};
    uint32_t len = 0;
    for (const auto& term : spec_.cols) {
        std::optional<ObjectId> fixed;
        if (!term.is_var) {
            fixed = term.constant;
        } else if (auto it = outer.find(term.var); it != outer.end()) {
            fixed = it->second;
        }
        if (!fixed) break;
        prefix[len++] = *fixed;
    }
    auto& tree = ctx_->db->tree(spec_.tree);
    it_.emplace(tree.prefix_scan(prefix, len));
    return true;
}

std::optional<algebra::Mapping> IndexNestedLoop::next() {
    for (;;) {
        if (!current_) {
            current_ = outer_->next();
            if (!current_) return std::nullopt;
            start_scan(*current_);
        }
        while (it_ && it_->valid()) {
            auto record = it_->record();
            it_->next();
            algebra::Mapping out = *current_;
            bool ok = true;
            for (std::size_t i = 0; i < spec_.cols.size() && ok; ++i) {
                const auto& term = spec_.cols[i];
                if (!term.is_var) {
                    ok = record[i] == term.constant;
                } else {
                    auto [pos, inserted] = out.emplace(term.var, record[i]);
                    if (!inserted) ok = pos->second == record[i];
                }
            }
            if (ok) {
                ++ctx_->intermediate_bindings;
                return out;
            }
        }
        current_.reset();
    }
}

void IndexNestedLoop::reset() {
    outer_->reset();
    current_.reset();
    it_.reset();
}

// ---- Filter --------------------------------------------------------------

Filter::Filter(ExecContext& ctx, OperatorPtr child, const query::Condition* condition)
    : ctx_(&ctx), child_(std::move(child)), condition_(condition) {}

void Filter::open(const algebra::Mapping& parent) { child_->open(parent); }

std::optional<algebra::Mapping> Filter::next() {
    while (auto mu = child_->next()) {
        if (eval_condition_db(*mu, *condition_, *ctx_->db)) return mu;
    }
    return std::nullopt;
}

void Filter::reset() { child_->reset(); }

// ---- OptionalJoin --------------------------------------------------------

OptionalJoin::OptionalJoin(ExecContext& ctx, OperatorPtr left, OperatorPtr right)
    : ctx_(&ctx), left_(std::move(left)), right_(std::move(right)) {}

void OptionalJoin::open(const algebra::Mapping& parent) {
    left_->open(parent);
    left_row_.reset();
    right_open_ = false;
    matched_ = false;
}

std::optional<algebra::Mapping> OptionalJoin::next() {
    for (;;) {
        if (right_open_) {
            if (auto mu = right_->next()) {
                matched_ = true;
                return mu;
            }
            right_open_ = false;
            if (!matched_) return left_row_;
            continue;
        }
        left_row_ = left_->next();
        if (!left_row_) return std::nullopt;
        right_->open(*left_row_);
        right_open_ = true;
        matched_ = false;
    }
}

void OptionalJoin::reset() {
    left_->reset();
    left_row_.reset();
    right_open_ = false;
    matched_ = false;
}

}  // namespace mdb::exec
