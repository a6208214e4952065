#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>

#include "mdb/storage/bplus_tree.hpp"
#include "mdb/storage/catalog.hpp"
#include "mdb/storage/edge_table.hpp"
#include "mdb/storage/object_file.hpp"

// A database directory holds:
//   objects.of            names and long strings (the shared dictionary)
//   edges.et              gamma as a flat triple table
//   objects.bt            every object id, arity 1
//   dg_stye.bt ...        four orders of the connectivity relation
//   labels_ol.bt/lo.bt    both orders of the label relation
//   props_opv.bt/pvo.bt   both orders of the property relation
//   catalog.json          statistics and the page size
//
// Column letters in tree names: s = source, t = target, y = type, e = edge
// id. The connectivity relation is stored in orders stye, tyse, yste and
// ytse so that any combination of bound columns that starts from a source,
// target or type has a matching prefix. The edge table answers id -> triple
// directly, which the trees cannot do without a scan.
namespace mdb {

enum class TreeId : unsigned {
    Objects = 0,
    DgStye,
    DgTyse,
    DgYste,
    DgYtse,
    LabelsOL,
    LabelsLO,
    PropsOPV,
    PropsPVO,
};

inline constexpr std::size_t kTreeCount = 9;

struct DatabaseOptions {
    uint32_t page_size = 4096;       // applies when creating; stored in the catalog
    std::size_t buffer_pages = 8192; // frames in the page buffer, per open
};

class Database {
public:
    // Initializes an empty database in dir (creating the directory).
    // Refuses a directory that already contains one.
    static std::unique_ptr<Database> create(const std::filesystem::path& dir,
                                            const DatabaseOptions& opts = {});

    // Opens an existing database. The stored page size wins over the option;
    // buffer_pages applies to this open.
    static std::unique_ptr<Database> open(const std::filesystem::path& dir,
                                          const DatabaseOptions& opts = {});

    // Bulk-populates an empty database from a graph whose ids were produced
    // against this database's dictionary (names()). Builds the edge table,
    // all nine trees and the catalog.
    void store_graph(const ReferenceGraph& g);

    ObjectFile& names() { return *names_; }
    const ObjectFile& names() const { return *names_; }
    EdgeTable& edges() { return *edges_; }
    const EdgeTable& edges() const { return *edges_; }
    BPlusTree& tree(TreeId t) { return *trees_[unsigned(t)]; }
    const Catalog& catalog() const { return catalog_; }
    BufferPool& pool() { return *pool_; }
    uint32_t page_size() const { return page_size_; }
    const std::filesystem::path& dir() const { return dir_; }

    EdgeRecord edge_lookup(ObjectId eid) const { return edges_->lookup(eid); }

    // Read-only id probes for query constants; never intern.
    std::optional<ObjectId> find_named(std::string_view name) const;
    std::optional<ObjectId> find_string(std::string_view s) const;

    // Root-to-leaf descents across all trees (seek instrumentation).
    uint64_t total_descents() const;

    void flush();

private:
    Database() = default;

    std::filesystem::path dir_;
    uint32_t page_size_ = 0;
    std::unique_ptr<FileManager> fm_;
    std::unique_ptr<BufferPool> pool_;
    std::unique_ptr<ObjectFile> names_;
    std::unique_ptr<EdgeTable> edges_;
    std::array<std::unique_ptr<BPlusTree>, kTreeCount> trees_;
    Catalog catalog_;
};

// Scans a database back into the in-memory reference form (edge table in id
// order, then both annotation relations).
ReferenceGraph mirror_database(Database& db);

}  // namespace mdb
