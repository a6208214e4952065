#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "mdb/storage/file_manager.hpp"

// Fixed set of page frames with second-chance (clock) replacement.
//
// Reference bits: a frame starts cold when its page is first loaded and is
// warmed only by a subsequent hit, so a page touched once is the preferred
// victim over one touched again. The hand sweeps over frames, skipping
// pinned ones and demoting warm ones; it stops at the first cold unpinned
// frame. Pinned pages are never evicted; when every frame is pinned the pool
// refuses the request rather than exceeding its capacity.
//
// Thread safety: frame bookkeeping (pin/unpin/eviction) is serialized by one
// mutex, so concurrent readers may pin and unpin freely; page content is
// only guarded by the pin itself.
namespace mdb {

class PagePin;

class BufferPool {
public:
    BufferPool(FileManager& fm, std::size_t capacity);
    ~BufferPool();
    BufferPool(const BufferPool&) = delete;
    BufferPool& operator=(const BufferPool&) = delete;

    // Pins the page, loading it if absent. Throws PoolExhaustedError when a
    // load is needed and every frame is pinned.
    PagePin pin(PageKey key);

    // Writes back all dirty pages (does not evict anything).
    void flush_all();

    // Forgets all unpinned pages of a file (used before a bulk rebuild).
    // Throws StorageError if any page of the file is still pinned.
    void drop_file(FileId f);

    std::size_t capacity() const { return frames_.size(); }
    std::size_t resident_count() const;
    std::size_t pinned_count() const;

    struct Stats {
        uint64_t page_reads = 0;  // misses that went to disk
        uint64_t hits = 0;
        uint64_t evictions = 0;
    };
    Stats stats() const;
    void reset_stats();

private:
    friend class PagePin;
    void unpin(std::size_t frame, bool dirty);
    std::size_t acquire_frame();  // caller holds mu_

    struct Frame {
        PageKey key;
        std::unique_ptr<std::byte[]> data;
        uint32_t pins = 0;
        bool ref = false;
        bool dirty = false;
        bool valid = false;
    };

    FileManager& fm_;
    std::vector<Frame> frames_;
    std::unordered_map<PageKey, std::size_t, PageKeyHash> table_;
    std::size_t hand_ = 0;
    std::size_t used_ = 0;  // frames handed out before the pool first filled
    mutable std::mutex mu_;
    Stats stats_;
};

// Movable RAII pin. The page stays resident and its buffer stays valid for
// the lifetime of the pin; destruction unpins (writing back is deferred to
// eviction or flush).
class PagePin {
public:
    PagePin() = default;
    PagePin(PagePin&& other) noexcept { *this = std::move(other); }
    PagePin& operator=(PagePin&& other) noexcept {
        release();
        pool_ = other.pool_;
        frame_ = other.frame_;
        data_ = other.data_;
        dirty_ = other.dirty_;
        other.pool_ = nullptr;
        return *this;
    }
    PagePin(const PagePin&) = delete;
    PagePin& operator=(const PagePin&) = delete;
    ~PagePin() { release(); }

    explicit operator bool() const { return pool_ != nullptr; }
    std::byte* data() { return data_; }
    const std::byte* data() const { return data_; }
    void mark_dirty() { dirty_ = true; }

    void release() {
        if (pool_) pool_->unpin(frame_, dirty_);
        pool_ = nullptr;
        dirty_ = false;
    }

private:
    friend class BufferPool;
    PagePin(BufferPool* pool, std::size_t frame, std::byte* data)
        : pool_(pool), frame_(frame), data_(data) {}

    BufferPool* pool_ = nullptr;
    std::size_t frame_ = 0;
    std::byte* data_ = nullptr;
    bool dirty_ = false;
};

}  // namespace mdb
