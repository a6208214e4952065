#include "mdb/storage/file_manager.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace mdb {

namespace {

[[noreturn]] void raise_io(const std::string& what, const std::filesystem::path& path) {
    throw StorageError(what + " '" + path.string() + "': " + std::strerror(errno));
}

}  // namespace

FileManager::FileManager(uint32_t page_size) : page_size_(page_size) {
    if (page_size < 64 || page_size % 8 != 0)
        throw StorageError("page size must be a multiple of 8 and at least 64 bytes");
}

FileManager::~FileManager() {
    for (auto& e : files_)
        if (e.fd >= 0) ::close(e.fd);
}

FileId FileManager::open(const std::filesystem::path& path, bool create_if_missing) {
    for (FileId i = 0; i < files_.size(); ++i)
        if (files_[i].path == path) return i;

    int flags = O_RDWR | (create_if_missing ? O_CREAT : 0);
    int fd = ::open(path.c_str(), flags, 0644);
    if (fd < 0) raise_io("cannot open", path);

    off_t size = ::lseek(fd, 0, SEEK_END);
    if (size < 0) raise_io("cannot stat", path);
    if (uint64_t(size) % page_size_ != 0) {
        ::close(fd);
        throw CorruptionError("file '" + path.string() + "' is not a whole number of pages");
    }

    files_.push_back({fd, uint64_t(size) / page_size_, path});
    return FileId(files_.size() - 1);
}

uint64_t FileManager::page_count(FileId f) const { return files_.at(f).pages; }

uint32_t FileManager::allocate_page(FileId f) {
    Entry& e = files_.at(f);
    return uint32_t(e.pages++);
}

void FileManager::truncate(FileId f) {
    Entry& e = files_.at(f);
    if (::ftruncate(e.fd, 0) != 0) raise_io("cannot truncate", e.path);
    e.pages = 0;
}

void FileManager::read_page(PageKey key, std::byte* out) const {
    const Entry& e = files_.at(key.file);
    if (key.page_no >= e.pages)
        throw StorageError("page " + std::to_string(key.page_no) + " out of range in '" +
                           e.path.string() + "'");
    ssize_t got = ::pread(e.fd, out, page_size_, off_t(key.page_no) * page_size_);
    if (got < 0) raise_io("cannot read", e.path);
    // A page that was allocated but never written back reads as zeroes.
    std::memset(out + got, 0, page_size_ - std::size_t(got));
}

void FileManager::write_page(PageKey key, const std::byte* data) {
    const Entry& e = files_.at(key.file);
    if (key.page_no >= e.pages)
        throw StorageError("write past allocated pages in '" + e.path.string() + "'");
    ssize_t put = ::pwrite(e.fd, data, page_size_, off_t(key.page_no) * page_size_);
    if (put != ssize_t(page_size_)) raise_io("cannot write", e.path);
}

void FileManager::sync_all() {
    for (auto& e : files_)
        if (e.fd >= 0) ::fsync(e.fd);
}

}  // namespace mdb
