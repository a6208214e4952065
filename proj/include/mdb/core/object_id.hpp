#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <string_view>

#include "mdb/core/errors.hpp"

// Object identifiers. Every object in a database -- node, edge, or value --
// is one fixed-width 8-byte id: a tag byte over a 56-bit payload. The total
// order used by the index trees is lexicographic on (tag, payload), which is
// exactly numeric order on the packed 64-bit word since the tag occupies the
// most significant byte.
namespace mdb {

inline constexpr uint64_t kPayloadMask = (uint64_t{1} << 56) - 1;
inline constexpr int64_t kInlineIntMin = -(int64_t{1} << 55);
inline constexpr int64_t kInlineIntMax = (int64_t{1} << 55) - 1;
inline constexpr std::size_t kInlineStringCap = 7;

enum class Tag : uint8_t {
    Invalid = 0x00,         // never stored; 0 doubles as the "no id" sentinel
    NamedNode = 0x01,       // payload = dictionary offset of the node's name
    AnonNode = 0x02,        // payload = ordinal
    Edge = 0x03,            // payload = position in the edge table
    InlineString = 0x04,    // payload = up to 7 bytes, first byte most significant
    InlineInt = 0x05,       // payload = 56-bit two's-complement integer
    ExternalString = 0x06,  // payload = dictionary offset of the string
    Transient = 0x07,       // runtime-only values (path witnesses); never stored
};

struct ObjectId {
    uint64_t raw = 0;

    constexpr ObjectId() = default;
    constexpr explicit ObjectId(uint64_t packed) : raw(packed) {}
    constexpr ObjectId(Tag tag, uint64_t payload)
        : raw((uint64_t(tag) << 56) | (payload & kPayloadMask)) {}

    constexpr Tag tag() const { return Tag(raw >> 56); }
    constexpr uint64_t payload() const { return raw & kPayloadMask; }

    constexpr bool is_valid() const { return tag() != Tag::Invalid; }
    constexpr bool is_named_node() const { return tag() == Tag::NamedNode; }
    constexpr bool is_anon_node() const { return tag() == Tag::AnonNode; }
    constexpr bool is_edge() const { return tag() == Tag::Edge; }
    constexpr bool is_node() const { return is_named_node() || is_anon_node(); }
    // Value objects: the annotation domain (strings and integers).
    constexpr bool is_value() const {
        return tag() == Tag::InlineString || tag() == Tag::InlineInt ||
               tag() == Tag::ExternalString;
    }
    constexpr bool is_string() const {
        return tag() == Tag::InlineString || tag() == Tag::ExternalString;
    }
    constexpr bool is_int() const { return tag() == Tag::InlineInt; }

    friend constexpr bool operator==(ObjectId a, ObjectId b) { return a.raw == b.raw; }
    friend constexpr bool operator!=(ObjectId a, ObjectId b) { return a.raw != b.raw; }
    friend constexpr bool operator<(ObjectId a, ObjectId b) { return a.raw < b.raw; }
    friend constexpr bool operator<=(ObjectId a, ObjectId b) { return a.raw <= b.raw; }
    friend constexpr bool operator>(ObjectId a, ObjectId b) { return a.raw > b.raw; }
    friend constexpr bool operator>=(ObjectId a, ObjectId b) { return a.raw >= b.raw; }

    static constexpr ObjectId named_node(uint64_t name_offset) {
        return ObjectId(Tag::NamedNode, name_offset);
    }
    static constexpr ObjectId anon_node(uint64_t ordinal) {
        return ObjectId(Tag::AnonNode, ordinal);
    }
    static constexpr ObjectId edge(uint64_t position) { return ObjectId(Tag::Edge, position); }
    static constexpr ObjectId external_string(uint64_t offset) {
        return ObjectId(Tag::ExternalString, offset);
    }
    static constexpr ObjectId transient(uint64_t ordinal) {
        return ObjectId(Tag::Transient, ordinal);
    }

    // Strings of at most 7 bytes live in the payload, first byte most
    // significant and the tail zero-padded, so payload order is bytewise
    // string order. NUL bytes inside the string are not representable.
    static ObjectId inline_string(std::string_view s) {
        uint64_t payload = 0;
        for (std::size_t i = 0; i < kInlineStringCap; ++i) {
            uint8_t byte = i < s.size() ? uint8_t(s[i]) : 0;
            payload |= uint64_t(byte) << (8 * (6 - i));
        }
        return ObjectId(Tag::InlineString, payload);
    }

    static constexpr ObjectId inline_int(int64_t v) {
        return ObjectId(Tag::InlineInt, uint64_t(v) & kPayloadMask);
    }

    // Inverse of inline_string; valid only for Tag::InlineString ids.
    std::string inline_chars() const {
        std::string out;
        for (std::size_t i = 0; i < kInlineStringCap; ++i) {
            char c = char(payload() >> (8 * (6 - i)) & 0xff);
            if (c == '\0') break;
            out.push_back(c);
        }
        return out;
    }

    // Inverse of inline_int (sign-extends the 56-bit payload).
    constexpr int64_t int_value() const {
        return int64_t(payload() << 8) >> 8;
    }
};

static_assert(sizeof(ObjectId) == 8);

struct ObjectIdHash {
    std::size_t operator()(ObjectId id) const { return std::hash<uint64_t>{}(id.raw); }
};

}  // namespace mdb
