#pragma once

#include "mdb/core/object_id.hpp"
#include "mdb/core/value.hpp"

// The comparison behind WHERE and ORDER BY. Two string values compare
// bytewise on their content (an external string is resolved first -- its
// payload is a dictionary offset, which reflects insertion order, not
// content order). Two integers compare numerically (the packed payload of a
// negative integer would otherwise sort above every positive one). Any other
// combination falls back to the (tag, payload) total order, which also keeps
// cross-class comparisons deterministic.
namespace mdb {

inline int value_compare(ObjectId a, ObjectId b, const ValueDict& dict) {
    if (a == b) return 0;
    if (a.is_string() && b.is_string()) {
        std::string sa = a.tag() == Tag::InlineString ? a.inline_chars() : dict.resolve(a.payload());
        std::string sb = b.tag() == Tag::InlineString ? b.inline_chars() : dict.resolve(b.payload());
        int c = sa.compare(sb);
        return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    if (a.is_int() && b.is_int()) {
        int64_t va = a.int_value(), vb = b.int_value();
        return va < vb ? -1 : va > vb ? 1 : 0;
    }
    return a.raw < b.raw ? -1 : 1;
}

}  // namespace mdb
