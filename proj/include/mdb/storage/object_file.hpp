#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>

#include "mdb/core/value.hpp"

// Append-only dictionary backing named-node names and long string values.
// On disk: a sequence of [u32 length][bytes] entries; an object id's payload
// is the byte offset of its entry. The whole file is kept in memory (it is
// read once at open, which also rebuilds the string -> offset hash -- the
// hash itself is never persisted). Appends go to memory and disk together.
namespace mdb {

class ObjectFile final : public ValueDict {
public:
    ObjectFile(const std::filesystem::path& path, bool create_if_missing);
    ~ObjectFile() override;
    ObjectFile(const ObjectFile&) = delete;
    ObjectFile& operator=(const ObjectFile&) = delete;

    uint64_t intern(std::string_view s) override;
    std::optional<uint64_t> lookup(std::string_view s) const override;
    std::string resolve(uint64_t offset) const override;

    uint64_t byte_size() const { return image_.size(); }
    std::size_t entry_count() const { return index_.size(); }

private:
    std::string image_;  // full file contents
    std::unordered_map<std::string, uint64_t> index_;
    int fd_ = -1;
    std::filesystem::path path_;
};

}  // namespace mdb
