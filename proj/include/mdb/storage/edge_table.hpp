#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mdb/core/reference_graph.hpp"

// The connectivity function gamma as a flat array: record i holds the
// (source, type, target) triple of edge i, 24 bytes each, so an edge id
// resolves to its triple by plain offset arithmetic. The table is mirrored
// in memory (it is small relative to the index trees) and appended to disk
// write-through. It deliberately bypasses the page buffer: its 24-byte
// records straddle page boundaries, and the pool's invariants are about
// tree pages.
namespace mdb {

class EdgeTable {
public:
    EdgeTable(const std::filesystem::path& path, bool create_if_missing);
    ~EdgeTable();
    EdgeTable(const EdgeTable&) = delete;
    EdgeTable& operator=(const EdgeTable&) = delete;

    // Appends a triple; the new edge's id is its position.
    ObjectId append(ObjectId source, ObjectId type, ObjectId target);

    // Triple of an existing edge; UnknownEdgeError for anything else.
    EdgeRecord lookup(ObjectId eid) const;

    uint64_t count() const { return triples_.size(); }

private:
    struct Triple {
        ObjectId source, type, target;
    };
    std::vector<Triple> triples_;
    int fd_ = -1;
    std::filesystem::path path_;
};

}  // namespace mdb
