#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mdb/core/object_id.hpp"

// Value objects carry the annotation domain: UTF-8 strings and 64-bit
// integers. Short strings are packed into the id itself; longer ones are
// dictionary-encoded through a ValueDict (the persistent implementation is
// the object file; tests and reference graphs use the in-memory one).
namespace mdb {

using Value = std::variant<int64_t, std::string>;

// Dictionary of long strings and node names: append-only, idempotent intern.
class ValueDict {
public:
    virtual ~ValueDict() = default;
    // Get-or-create; returns the stable offset for s.
    virtual uint64_t intern(std::string_view s) = 0;
    // Read-only probe; empty if s was never interned.
    virtual std::optional<uint64_t> lookup(std::string_view s) const = 0;
    // Offset back to string; CorruptionError on an offset that was never handed out.
    virtual std::string resolve(uint64_t offset) const = 0;
};

class InMemoryDict final : public ValueDict {
public:
    uint64_t intern(std::string_view s) override {
        auto it = index_.find(std::string(s));
        if (it != index_.end()) return it->second;
        uint64_t off = entries_.size();
        entries_.emplace_back(s);
        index_.emplace(entries_.back(), off);
        return off;
    }
    std::optional<uint64_t> lookup(std::string_view s) const override {
        auto it = index_.find(std::string(s));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::string resolve(uint64_t offset) const override {
        if (offset >= entries_.size())
            throw CorruptionError("dictionary offset " + std::to_string(offset) + " out of range");
        return entries_[offset];
    }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::string> entries_;
    std::unordered_map<std::string, uint64_t> index_;
};

// String -> id. Strings of at most 7 bytes are always inlined; longer ones
// are interned. Deterministic: the same string yields the same id.
inline ObjectId encode_string(std::string_view s, ValueDict& dict) {
    if (s.size() <= kInlineStringCap) return ObjectId::inline_string(s);
    return ObjectId::external_string(dict.intern(s));
}

// Read-only variant: never mutates the dictionary. Returns nothing when the
// string is long and absent from the dictionary (i.e. it occurs nowhere in
// the database).
inline std::optional<ObjectId> encode_string_readonly(std::string_view s, const ValueDict& dict) {
    if (s.size() <= kInlineStringCap) return ObjectId::inline_string(s);
    if (auto off = dict.lookup(s)) return ObjectId::external_string(*off);
    return std::nullopt;
}

inline ObjectId encode_int(int64_t v) {
    if (v < kInlineIntMin || v > kInlineIntMax)
        throw OverflowError("integer " + std::to_string(v) + " outside the 56-bit value range");
    return ObjectId::inline_int(v);
}

inline ObjectId encode_value(const Value& v, ValueDict& dict) {
    if (std::holds_alternative<int64_t>(v)) return encode_int(std::get<int64_t>(v));
    return encode_string(std::get<std::string>(v), dict);
}

// Id back to value; NotAValueError for node/edge/invalid ids, CorruptionError
// surfaces from the dictionary for a bad external offset.
inline Value decode_value(ObjectId id, const ValueDict& dict) {
    switch (id.tag()) {
        case Tag::InlineString: return id.inline_chars();
        case Tag::InlineInt: return id.int_value();
        case Tag::ExternalString: return dict.resolve(id.payload());
        default:
            throw NotAValueError("id with tag " + std::to_string(unsigned(id.tag())) +
                                 " is not a value object");
    }
}

}  // namespace mdb
