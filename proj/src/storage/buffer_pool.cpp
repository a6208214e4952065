#include "mdb/storage/buffer_pool.hpp"

namespace mdb {

BufferPool::BufferPool(FileManager& fm, std::size_t capacity) : fm_(fm) {
    if (capacity == 0) throw StorageError("buffer pool needs at least one frame");
    frames_.resize(capacity);
    for (auto& f : frames_) f.data = std::make_unique<std::byte[]>(fm.page_size());
}

BufferPool::~BufferPool() { flush_all(); }

PagePin BufferPool::pin(PageKey key) {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = table_.find(key); it != table_.end()) {
        Frame& f = frames_[it->second];
        f.ref = true;  // warmed by a repeat touch, not by the initial load
        ++f.pins;
        ++stats_.hits;
        return PagePin(this, it->second, f.data.get());
    }
    std::size_t idx = acquire_frame();
    Frame& f = frames_[idx];
    fm_.read_page(key, f.data.get());
    f.key = key;
    f.pins = 1;
    f.ref = false;
    f.dirty = false;
    f.valid = true;
    table_.emplace(key, idx);
    ++stats_.page_reads;
    return PagePin(this, idx, f.data.get());
}

std::size_t BufferPool::acquire_frame() {
    if (used_ < frames_.size()) return used_++;
    // Clock sweep: two full revolutions guarantee that if any unpinned frame
    // exists, we stop at one (the first pass may only demote warm frames).
    for (std::size_t step = 0; step < 2 * frames_.size(); ++step) {
        Frame& f = frames_[hand_];
        std::size_t at = hand_;
        hand_ = (hand_ + 1) % frames_.size();
        if (f.pins > 0) continue;
        if (f.ref) {
            f.ref = false;
            continue;
        }
        if (f.dirty) fm_.write_page(f.key, f.data.get());
        table_.erase(f.key);
        f.valid = false;
        ++stats_.evictions;
        return at;
    }
    throw PoolExhaustedError("all " + std::to_string(frames_.size()) +
                             " buffer frames are pinned");
}

void BufferPool::unpin(std::size_t frame, bool dirty) {
    std::lock_guard<std::mutex> lock(mu_);
    Frame& f = frames_[frame];
    if (dirty) f.dirty = true;
    --f.pins;
}

void BufferPool::flush_all() {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& f : frames_)
        if (f.valid && f.dirty) {
            fm_.write_page(f.key, f.data.get());
            f.dirty = false;
        }
}

void BufferPool::drop_file(FileId file) {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& f : frames_)
        if (f.valid && f.key.file == file) {
            if (f.pins > 0) throw StorageError("cannot drop a file with pinned pages");
            table_.erase(f.key);
            f.valid = false;
            f.dirty = false;
        }
}

std::size_t BufferPool::resident_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return table_.size();
}

std::size_t BufferPool::pinned_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::size_t n = 0;
    for (const auto& f : frames_)
        if (f.valid && f.pins > 0) ++n;
    return n;
}

BufferPool::Stats BufferPool::stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    return stats_;
}

void BufferPool::reset_stats() {
    std::lock_guard<std::mutex> lock(mu_);
    stats_ = Stats{};
}

}  // namespace mdb
