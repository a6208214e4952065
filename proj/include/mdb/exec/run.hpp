#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdb/exec/operator.hpp"

namespace mdb::exec {

// Output shape of a query: what to project, how to order, how many rows to
// keep (0 keeps everything). Ordering is always applied before limiting.
struct ModifierSpec {
    std::vector<query::SelectionElement> select;
    std::vector<query::OrderKey> order;
    uint64_t limit = 0;
};

// Value of one selection element under a mapping, probing stored properties
// for dotted elements. Unbound variables and undefined properties yield null.
std::optional<ObjectId> element_value(const algebra::Mapping& mu,
                                      const query::SelectionElement& e, Database& db);

// Pulls mappings from the pattern pipeline and yields projected rows. With
// order keys the input is materialized and sorted (stably, by the keys and
// then by full-row canonical order) before any row is served; sorts larger
// than the context's spill budget run externally through temporary files.
// Without order keys rows stream straight through. The limit cuts the
// sequence after the sort, so it never changes which prefix is produced.
class ResultStream {
public:
    ResultStream(ExecContext& ctx, Operator& root, ModifierSpec spec);
    ~ResultStream();
    ResultStream(const ResultStream&) = delete;
    ResultStream& operator=(const ResultStream&) = delete;

    const std::vector<query::SelectionElement>& columns() const { return spec_.select; }
    std::optional<algebra::Row> next();

private:
    struct SortedOutput;

    algebra::Row project(const algebra::Mapping& mu) const;
    void materialize_sorted();

    ExecContext* ctx_;
    Operator* root_;
    ModifierSpec spec_;
    uint64_t served_ = 0;
    bool streaming_ = true;
    std::unique_ptr<SortedOutput> sorted_;
};

}  // namespace mdb::exec
