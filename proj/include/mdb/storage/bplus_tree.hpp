#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mdb/core/object_id.hpp"
#include "mdb/storage/buffer_pool.hpp"

// Disk-resident B+ tree over fixed-width records of 1..4 object ids,
// compared lexicographically column by column (i.e. in the packed
// (tag, payload) order of each id). The tree itself is the record store --
// there are no separate keys and payloads, a record is both. Duplicate
// records are permitted; bulk load keeps them adjacent and incremental
// insert appends new duplicates next to the existing ones.
//
// File layout: page 0 holds metadata (arity, root, height, record count);
// every other page is a node. Leaves are chained left to right for range
// scans. Bulk load packs leaves full from sorted input and builds the
// internal levels bottom-up, so identical input yields identical files.
//
// Pin discipline: descents hold at most one pinned page at a time, and an
// open iterator holds exactly its current leaf.
namespace mdb {

class BPlusTree {
public:
    using Record = std::array<ObjectId, 4>;
    static constexpr uint32_t kMaxArity = 4;

    // Initializes path as an empty tree (metadata plus one empty leaf).
    static void create_empty(FileManager& fm, BufferPool& pool,
                             const std::filesystem::path& path, uint32_t arity);

    // Rebuilds path from records sorted ascending (duplicates allowed).
    // Throws SortOrderError if the input is out of order.
    static void bulk_load(FileManager& fm, BufferPool& pool, const std::filesystem::path& path,
                          uint32_t arity, const std::vector<Record>& sorted);

    // Opens an existing tree; CorruptionError on a malformed file.
    BPlusTree(FileManager& fm, BufferPool& pool, const std::filesystem::path& path);

    uint32_t arity() const { return arity_; }
    uint64_t record_count() const { return record_count_; }
    uint32_t height() const { return height_; }
    uint64_t descents() const { return descents_; }  // root-to-leaf seeks performed

    void insert(const Record& r);

    // Forward scan positioned at some record, bounded above (inclusively)
    // when created by prefix_scan. Holds one pinned leaf while valid.
    class Iterator {
    public:
        Iterator() = default;
        bool valid() const { return tree_ != nullptr; }
        const Record& record() const { return current_; }
        void next();
        // Moves forward to the first record >= target; no-op when the
        // current record already satisfies that. Never moves backwards.
        void seek(const Record& target);
        void close();

    private:
        friend class BPlusTree;
        void settle();  // resolve slot/page overflow, then apply the bound

        BPlusTree* tree_ = nullptr;
        PagePin page_;
        uint32_t slot_ = 0;
        Record current_{};
        Record upper_{};
        bool bounded_ = false;
    };

    Iterator scan_all();
    Iterator lower_bound(const Record& target);
    // All records whose first prefix_len columns equal prefix.
    Iterator prefix_scan(const Record& prefix, uint32_t prefix_len);

    static int compare(const Record& a, const Record& b, uint32_t arity) {
        for (uint32_t i = 0; i < arity; ++i) {
            if (a[i] < b[i]) return -1;
            if (b[i] < a[i]) return 1;
        }
        return 0;
    }

private:
    friend class Iterator;

    uint32_t leaf_capacity() const { return leaf_cap_; }
    PagePin pin(uint32_t page_no);
    // Descends to the leaf that may contain the first record >= target
    // (for_insert uses upper-bound routing so duplicates append to the
    // right). Fills path (page, child index) when given.
    PagePin descend(const Record& target, bool for_insert,
                    std::vector<std::pair<uint32_t, uint32_t>>* path);
    void write_meta();
    void bump_count(int64_t delta);
    void split_leaf(PagePin& leaf, const Record& r, uint32_t pos,
                    std::vector<std::pair<uint32_t, uint32_t>>& path);
    void insert_into_parent(std::vector<std::pair<uint32_t, uint32_t>>& path,
                            const Record& sep, uint32_t right_page);

    FileManager& fm_;
    BufferPool& pool_;
    FileId file_ = 0;
    uint32_t arity_ = 0;
    uint32_t root_ = 0;
    uint32_t height_ = 0;
    uint64_t record_count_ = 0;
    uint32_t leaf_cap_ = 0;
    uint32_t int_cap_ = 0;  // separators per internal node
    uint64_t descents_ = 0;
};

}  // namespace mdb
