#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "mdb/core/errors.hpp"

// Page-granular file access. Every paged file is a whole number of pages;
// pages are allocated by appending and never freed. Reads of allocated but
// never-written pages yield zeroes, so freshly allocated pages start blank
// and identical imports produce identical files.
namespace mdb {

using FileId = uint32_t;

struct PageKey {
    FileId file = 0;
    uint32_t page_no = 0;
    friend bool operator==(PageKey, PageKey) = default;
};

struct PageKeyHash {
    std::size_t operator()(PageKey k) const {
        return std::hash<uint64_t>{}(uint64_t(k.file) << 32 | k.page_no);
    }
};

class FileManager {
public:
    explicit FileManager(uint32_t page_size);
    ~FileManager();
    FileManager(const FileManager&) = delete;
    FileManager& operator=(const FileManager&) = delete;

    // Opens (or creates) a paged file; returns a stable handle. Opening the
    // same path twice returns the same handle.
    FileId open(const std::filesystem::path& path, bool create_if_missing);

    uint32_t page_size() const { return page_size_; }
    uint64_t page_count(FileId f) const;

    // Extends the file by one (zeroed) page; returns the new page number.
    uint32_t allocate_page(FileId f);

    // Drops all content; page count becomes zero.
    void truncate(FileId f);

    void read_page(PageKey key, std::byte* out) const;
    void write_page(PageKey key, const std::byte* data);

    void sync_all();

private:
    struct Entry {
        int fd = -1;
        uint64_t pages = 0;
        std::filesystem::path path;
    };
    std::vector<Entry> files_;
    uint32_t page_size_;
};

}  // namespace mdb
