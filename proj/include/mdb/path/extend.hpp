#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "mdb/exec/operator.hpp"
#include "mdb/path/automaton.hpp"
#include "mdb/path/search.hpp"

namespace mdb::path {

// Which endpoint the search starts from. The planner anchors at an endpoint
// that is a constant or already bound; a target anchor runs the reversed
// automaton so the reached objects are the path sources.
enum class Anchor { Source, Target };

// Pattern operator that extends each input mapping with the endpoint pairs
// of a path expression. The anchored endpoint's value comes from the mapping
// (or a constant); the free endpoint is bound to every object reachable per
// the expression, each pair produced once. When the path carries a name the
// mapping also binds it to a witness: a shortest path, smallest edge-id
// sequence first, interned in the context's witness table.
//
// Both endpoints resolved at runtime degrades to a reachability check that
// stops early. A mapping that resolves neither endpoint raises
// UnboundEndpointsError (the planner inserts a generator scan beforehand).
class PathExtend : public exec::Operator {
public:
    PathExtend(exec::ExecContext& ctx, exec::OperatorPtr input, const query::PathRel& rel,
               query::Term source, query::Term target, Anchor anchor);

    void open(const algebra::Mapping& parent) override;
    std::optional<algebra::Mapping> next() override;
    void reset() override;

private:
    std::optional<ObjectId> resolve(const query::Term& t, const algebra::Mapping& mu) const;
    bool start_row(const algebra::Mapping& mu);  // set up the search for one input mapping
    std::optional<algebra::Mapping> emit(ObjectId source, ObjectId target,
                                         std::optional<algebra::PathWitness> witness);

    exec::ExecContext* ctx_;
    exec::OperatorPtr input_;
    const query::PathRel* rel_;
    query::Term source_;
    query::Term target_;
    Anchor anchor_;
    bool want_witness_;

    RpqAutomaton forward_;
    RpqAutomaton reversed_;

    std::optional<algebra::Mapping> current_;
    std::optional<PathSearch> search_;
    bool search_from_source_ = true;          // hits are targets (else sources)
    ObjectId anchor_value_;
    std::optional<ObjectId> other_value_;     // set when both endpoints resolved
    std::vector<ObjectId> pending_sources_;   // two-phase target-anchored witnesses
    std::size_t pending_pos_ = 0;
    bool row_done_ = true;
};

}  // namespace mdb::path
