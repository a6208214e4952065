#include "mdb/storage/object_file.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mdb/core/errors.hpp"

namespace mdb {

ObjectFile::ObjectFile(const std::filesystem::path& path, bool create_if_missing)
    : path_(path) {
    int flags = O_RDWR | (create_if_missing ? O_CREAT : 0);
    fd_ = ::open(path.c_str(), flags, 0644);
    if (fd_ < 0)
        throw StorageError("cannot open object file '" + path.string() +
                           "': " + std::strerror(errno));

    off_t size = ::lseek(fd_, 0, SEEK_END);
    image_.resize(std::size_t(size));
    if (size > 0) {
        ssize_t got = ::pread(fd_, image_.data(), std::size_t(size), 0);
        if (got != size)
            throw StorageError("cannot read object file '" + path.string() + "'");
    }

    // One pass over the entries both validates the file and rebuilds the
    // string -> offset index.
    uint64_t off = 0;
    while (off < image_.size()) {
        if (off + 4 > image_.size())
            throw CorruptionError("object file truncated inside a length prefix");
        uint32_t len;
        std::memcpy(&len, image_.data() + off, 4);
        if (off + 4 + len > image_.size())
            throw CorruptionError("object file truncated inside an entry");
        index_.emplace(image_.substr(off + 4, len), off);
        off += 4 + len;
    }
}

ObjectFile::~ObjectFile() {
    if (fd_ >= 0) ::close(fd_);
}

uint64_t ObjectFile::intern(std::string_view s) {
    if (auto it = index_.find(std::string(s)); it != index_.end()) return it->second;
    uint64_t off = image_.size();
    uint32_t len = uint32_t(s.size());
    image_.append(reinterpret_cast<const char*>(&len), 4);
    image_.append(s);
    ssize_t put = ::pwrite(fd_, image_.data() + off, 4 + s.size(), off_t(off));
    if (put != ssize_t(4 + s.size()))
        throw StorageError("cannot append to object file '" + path_.string() +
                           "': " + std::strerror(errno));
    index_.emplace(std::string(s), off);
    return off;
}

std::optional<uint64_t> ObjectFile::lookup(std::string_view s) const {
    auto it = index_.find(std::string(s));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string ObjectFile::resolve(uint64_t offset) const {
    if (offset + 4 > image_.size())
        throw CorruptionError("object file offset " + std::to_string(offset) + " out of range");
    uint32_t len;
    std::memcpy(&len, image_.data() + offset, 4);
    if (offset + 4 + len > image_.size())
        throw CorruptionError("object file entry at " + std::to_string(offset) +
                              " overruns the file");
    return image_.substr(offset + 4, len);
}

}  // namespace mdb
