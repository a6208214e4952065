#pragma once

#include <cstdint>
#include <filesystem>
#include <map>

#include "mdb/core/reference_graph.hpp"

// Summary statistics gathered at import time and persisted as JSON next to
// the data files. The planner's cardinality estimates read these; nothing
// here is consulted for correctness.
namespace mdb {

struct Catalog {
    uint64_t object_count = 0;
    uint64_t edge_count = 0;
    uint64_t label_pair_count = 0;
    uint64_t prop_pair_count = 0;

    uint64_t distinct_sources = 0;
    uint64_t distinct_targets = 0;
    uint64_t distinct_types = 0;
    uint64_t distinct_labels = 0;
    uint64_t distinct_label_objects = 0;
    uint64_t distinct_prop_keys = 0;
    uint64_t distinct_prop_objects = 0;

    std::map<uint64_t, uint64_t> edges_by_type;     // type id (raw) -> edges of that type
    std::map<uint64_t, uint64_t> objects_by_label;  // label id (raw) -> objects carrying it

    struct KeyStat {
        uint64_t count = 0;            // (object, key) pairs with this key
        uint64_t distinct_values = 0;  // distinct values assigned under it
    };
    std::map<uint64_t, KeyStat> props_by_key;  // key id (raw) -> stats

    static Catalog compute(const ReferenceGraph& g);

    // The catalog file also records the database's page size, which is a
    // property of the files rather than a per-open option.
    void save(const std::filesystem::path& file, uint32_t page_size) const;
    static Catalog load(const std::filesystem::path& file, uint32_t& page_size_out);
};

}  // namespace mdb
