#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "mdb/core/object_id.hpp"
#include "mdb/core/order.hpp"
#include "mdb/core/value.hpp"

using namespace mdb;

namespace {

std::string random_string(std::mt19937_64& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<int> ch_dist(1, 255);  // NUL not representable inline
    std::size_t n = len_dist(rng);
    std::string s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_back(char(ch_dist(rng)));
    return s;
}

}  // namespace

TEST(ObjectId, TagAndPayloadRoundTrip) {
    ObjectId id(Tag::Edge, 42);
    EXPECT_EQ(id.tag(), Tag::Edge);
    EXPECT_EQ(id.payload(), 42u);

    EXPECT_EQ(ObjectId::named_node(7).tag(), Tag::NamedNode);
    EXPECT_EQ(ObjectId::anon_node(3).tag(), Tag::AnonNode);
    EXPECT_EQ(ObjectId::edge(0).tag(), Tag::Edge);
    EXPECT_EQ(ObjectId::external_string(9).tag(), Tag::ExternalString);
    EXPECT_EQ(ObjectId().tag(), Tag::Invalid);
    EXPECT_FALSE(ObjectId().is_valid());
}

TEST(ObjectId, InlineStringPacksFirstByteMostSignificant) {
    // "male" -> payload bytes 6d 61 6c 65 00 00 00, zero-padded on the right.
    ObjectId id = ObjectId::inline_string("male");
    EXPECT_EQ(id.tag(), Tag::InlineString);
    uint64_t p = id.payload();
    std::vector<uint8_t> bytes;
    for (int i = 6; i >= 0; --i) bytes.push_back(uint8_t(p >> (8 * i) & 0xff));
    EXPECT_EQ(bytes, (std::vector<uint8_t>{0x6d, 0x61, 0x6c, 0x65, 0, 0, 0}));
    EXPECT_EQ(id.inline_chars(), "male");
}

TEST(ObjectId, InlineStringOrderIsBytewiseOrder) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        std::string a = random_string(rng, 7), b = random_string(rng, 7);
        ObjectId ia = ObjectId::inline_string(a), ib = ObjectId::inline_string(b);
        EXPECT_EQ(a < b, ia < ib) << '"' << a << "\" vs \"" << b << '"';
        EXPECT_EQ(a == b, ia == ib);
    }
}

TEST(ObjectId, InlineIntIsTwosComplement56) {
    EXPECT_EQ(ObjectId::inline_int(-1).payload(), kPayloadMask);
    EXPECT_EQ(ObjectId::inline_int(-1).int_value(), -1);
    EXPECT_EQ(ObjectId::inline_int(0).int_value(), 0);
    EXPECT_EQ(ObjectId::inline_int(kInlineIntMin).int_value(), kInlineIntMin);
    EXPECT_EQ(ObjectId::inline_int(kInlineIntMax).int_value(), kInlineIntMax);
}

TEST(ObjectId, TotalOrderIsLexicographicOnTagThenPayload) {
    // The tag occupies the most significant byte, so distinct tags order
    // before payloads are even looked at.
    EXPECT_LT(ObjectId::named_node(999), ObjectId::anon_node(0));
    EXPECT_LT(ObjectId::anon_node(999), ObjectId::edge(0));
    EXPECT_LT(ObjectId::edge(999), ObjectId::inline_string("a"));
    EXPECT_LT(ObjectId::edge(1), ObjectId::edge(2));
}

TEST(Value, ShortStringsAlwaysInline) {
    InMemoryDict dict;
    EXPECT_EQ(encode_string("", dict).tag(), Tag::InlineString);
    EXPECT_EQ(encode_string("1234567", dict).tag(), Tag::InlineString);
    EXPECT_EQ(encode_string("12345678", dict).tag(), Tag::ExternalString);
    EXPECT_EQ(dict.size(), 1u);  // only the 8-byte string went to the dictionary
}

TEST(Value, EncodeDecodeRoundTrip) {
    InMemoryDict dict;
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<int64_t> small_int(-1000000, 1000000);
    for (int i = 0; i < 100000; ++i) {
        Value v;
        switch (kind(rng)) {
            case 0: v = small_int(rng); break;
            case 1: {
                // boundary-heavy integers
                int64_t edge_cases[] = {0, -1, 1, kInlineIntMin, kInlineIntMax,
                                        kInlineIntMin + 1, kInlineIntMax - 1};
                v = edge_cases[i % 7];
                break;
            }
            case 2: v = random_string(rng, 7); break;
            default: v = random_string(rng, 40); break;
        }
        ObjectId id = encode_value(v, dict);
        EXPECT_EQ(decode_value(id, dict), v);
        // Determinism: re-encoding yields the identical id.
        EXPECT_EQ(encode_value(v, dict), id);
    }
}

TEST(Value, IntegerOverflowRejected) {
    EXPECT_THROW(encode_int(kInlineIntMax + 1), OverflowError);
    EXPECT_THROW(encode_int(kInlineIntMin - 1), OverflowError);
    EXPECT_NO_THROW(encode_int(kInlineIntMax));
    EXPECT_NO_THROW(encode_int(kInlineIntMin));
}

TEST(Value, DecodeNonValueThrows) {
    InMemoryDict dict;
    EXPECT_THROW(decode_value(ObjectId::named_node(0), dict), NotAValueError);
    EXPECT_THROW(decode_value(ObjectId::edge(0), dict), NotAValueError);
    EXPECT_THROW(decode_value(ObjectId(), dict), NotAValueError);
}

TEST(Value, BadDictionaryOffsetThrows) {
    InMemoryDict dict;
    dict.intern("only entry here");
    EXPECT_THROW(decode_value(ObjectId::external_string(5), dict), CorruptionError);
}

TEST(Value, InternIdempotent) {
    InMemoryDict dict;
    uint64_t a = dict.intern("a long enough string");
    uint64_t b = dict.intern("a long enough string");
    uint64_t c = dict.intern("a different long string");
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_EQ(dict.resolve(a), "a long enough string");
}

TEST(ValueOrder, IntegersCompareNumerically) {
    InMemoryDict dict;
    EXPECT_LT(value_compare(encode_int(-5), encode_int(3), dict), 0);
    EXPECT_LT(value_compare(encode_int(kInlineIntMin), encode_int(kInlineIntMax), dict), 0);
    EXPECT_EQ(value_compare(encode_int(7), encode_int(7), dict), 0);
    // ...even though the packed payload of a negative sorts above a positive.
    EXPECT_GT(ObjectId::inline_int(-5).raw, ObjectId::inline_int(3).raw);
}

TEST(ValueOrder, StringsCompareBytewiseAcrossEncodings) {
    InMemoryDict dict;
    ObjectId zz = encode_string("zz", dict);                     // inline
    ObjectId aa = encode_string("aaaaaaaaaa", dict);             // external
    ObjectId ab = encode_string("aaaaaaaaab", dict);             // external, later offset
    EXPECT_GT(value_compare(zz, aa, dict), 0);   // content order, not tag order
    EXPECT_LT(value_compare(aa, ab, dict), 0);
    EXPECT_LT(zz.raw, aa.raw);                   // raw order disagrees; that is expected
}

TEST(ValueOrder, MixedClassesFallBackToRawOrder) {
    InMemoryDict dict;
    ObjectId s = encode_string("abc", dict);
    ObjectId i = encode_int(5);
    ObjectId n = ObjectId::named_node(0);
    EXPECT_EQ(value_compare(s, i, dict) < 0, s.raw < i.raw);
    EXPECT_EQ(value_compare(n, i, dict) < 0, n.raw < i.raw);
}
