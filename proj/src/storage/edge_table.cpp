#include "mdb/storage/edge_table.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mdb/core/errors.hpp"

namespace mdb {

static_assert(sizeof(ObjectId) == 8);

EdgeTable::EdgeTable(const std::filesystem::path& path, bool create_if_missing) : path_(path) {
    int flags = O_RDWR | (create_if_missing ? O_CREAT : 0);
    fd_ = ::open(path.c_str(), flags, 0644);
    if (fd_ < 0)
        throw StorageError("cannot open edge table '" + path.string() +
                           "': " + std::strerror(errno));
    off_t size = ::lseek(fd_, 0, SEEK_END);
    if (size % 24 != 0)
        throw CorruptionError("edge table '" + path.string() + "' is not a whole number of records");
    triples_.resize(std::size_t(size) / 24);
    if (size > 0) {
        ssize_t got = ::pread(fd_, triples_.data(), std::size_t(size), 0);
        if (got != size) throw StorageError("cannot read edge table '" + path.string() + "'");
    }
}

EdgeTable::~EdgeTable() {
    if (fd_ >= 0) ::close(fd_);
}

ObjectId EdgeTable::append(ObjectId source, ObjectId type, ObjectId target) {
    uint64_t position = triples_.size();
    Triple t{source, type, target};
    ssize_t put = ::pwrite(fd_, &t, 24, off_t(position * 24));
    if (put != 24)
        throw StorageError("cannot append to edge table '" + path_.string() +
                           "': " + std::strerror(errno));
    triples_.push_back(t);
    return ObjectId::edge(position);
}

EdgeRecord EdgeTable::lookup(ObjectId eid) const {
    if (!eid.is_edge() || eid.payload() >= triples_.size())
        throw UnknownEdgeError("no edge with id payload " + std::to_string(eid.payload()));
    const Triple& t = triples_[eid.payload()];
    return {t.source, t.type, t.target, eid};
}

}  // namespace mdb
