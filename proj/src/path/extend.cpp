#include "mdb/path/extend.hpp"

#include <utility>

#include "mdb/core/errors.hpp"

namespace mdb::path {

PathExtend::PathExtend(exec::ExecContext& ctx, exec::OperatorPtr input, const query::PathRel& rel,
                       query::Term source, query::Term target, Anchor anchor)
    : ctx_(&ctx),
      input_(std::move(input)),
      rel_(&rel),
      source_(std::move(source)),
      target_(std::move(target)),
      anchor_(anchor),
      want_witness_(rel.path_var.has_value()),
      forward_(compile_rpq(*rel.rpq, false)),
      reversed_(compile_rpq(*rel.rpq, true)) {}

void PathExtend::open(const algebra::Mapping& parent) {
    input_->open(parent);
    current_.reset();
    search_.reset();
    pending_sources_.clear();
    pending_pos_ = 0;
    row_done_ = true;
}

std::optional<ObjectId> PathExtend::resolve(const query::Term& t,
                                            const algebra::Mapping& mu) const {
    if (!t.is_var) return t.constant;
    auto it = mu.find(t.var);
    if (it == mu.end()) return std::nullopt;
    return it->second;
}

// Builds the output mapping for one endpoint pair; nothing when an existing
// binding disagrees (a repeated endpoint or path variable).
std::optional<algebra::Mapping> PathExtend::emit(ObjectId source, ObjectId target,
                                                 std::optional<algebra::PathWitness> witness) {
    algebra::Mapping out = *current_;
    auto bind = [&out](const query::Term& term, ObjectId value) {
        if (!term.is_var) return term.constant == value;
        auto [it, inserted] = out.emplace(term.var, value);
        return inserted || it->second == value;
    };
    if (!bind(source_, source) || !bind(target_, target)) return std::nullopt;
    if (want_witness_) {
        ObjectId id = ctx_->witnesses.intern(std::move(*witness));
        auto [it, inserted] = out.emplace(*rel_->path_var, id);
        if (!inserted && it->second != id) return std::nullopt;
    }
    ++ctx_->intermediate_bindings;
    return out;
}

bool PathExtend::start_row(const algebra::Mapping& mu) {
    search_.reset();
    pending_sources_.clear();
    pending_pos_ = 0;
    other_value_.reset();
    auto s = resolve(source_, mu);
    auto t = resolve(target_, mu);
    if (!s && !t) {
        throw UnboundEndpointsError("path pattern has no bound endpoint to search from");
    }
    if (s) {
        anchor_value_ = *s;
        other_value_ = t;
        if (!t) {
            search_.emplace(*ctx_->db, forward_, *s, want_witness_);
            search_from_source_ = true;
        }
        return true;
    }
    // Target anchor with a free source: run the reversed automaton from the
    // target. With a named path the canonical witness must follow the
    // forward tie-break order, so the sources found in phase one each get a
    // forward search of their own.
    anchor_value_ = *t;
    if (want_witness_) {
        PathSearch rev(*ctx_->db, reversed_, *t, false);
        while (auto hit = rev.next()) pending_sources_.push_back(hit->object);
    } else {
        search_.emplace(*ctx_->db, reversed_, *t, false);
        search_from_source_ = false;
    }
    return true;
}

std::optional<algebra::Mapping> PathExtend::next() {
    for (;;) {
        if (!row_done_) {
            if (other_value_) {
                // Both endpoints resolved: one reachability probe.
                row_done_ = true;
                ObjectId s = anchor_value_;
                ObjectId t = *other_value_;
                if (want_witness_) {
                    if (auto w = canonical_between(*ctx_->db, forward_, s, t)) {
                        if (auto out = emit(s, t, std::move(w))) return out;
                    }
                } else {
                    PathSearch probe(*ctx_->db, forward_, s, false);
                    while (auto hit = probe.next()) {
                        if (hit->object == t) {
                            if (auto out = emit(s, t, std::nullopt)) return out;
                            break;
                        }
                    }
                }
                continue;
            }
            if (search_) {
                if (auto hit = search_->next()) {
                    auto out = search_from_source_
                                   ? emit(anchor_value_, hit->object, std::move(hit->witness))
                                   : emit(hit->object, anchor_value_, std::move(hit->witness));
                    if (out) return out;
                    continue;
                }
                search_.reset();
                row_done_ = true;
                continue;
            }
            if (pending_pos_ < pending_sources_.size()) {
                ObjectId src = pending_sources_[pending_pos_++];
                auto w = canonical_between(*ctx_->db, forward_, src, anchor_value_);
                if (!w) continue;
                if (auto out = emit(src, anchor_value_, std::move(w))) return out;
                continue;
            }
            row_done_ = true;
        }
        current_ = input_->next();
        if (!current_) return std::nullopt;
        start_row(*current_);
        row_done_ = false;
    }
}

void PathExtend::reset() {
    input_->reset();
    current_.reset();
    search_.reset();
    pending_sources_.clear();
    pending_pos_ = 0;
    row_done_ = true;
}

}  // namespace mdb::path
