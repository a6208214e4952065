#include "mdb/algebra/solution.hpp"

#include <algorithm>

#include "mdb/core/errors.hpp"

namespace mdb::algebra {

bool compatible(const Mapping& a, const Mapping& b) {
    // Walk the smaller map, probing the larger.
    const Mapping& small = a.size() <= b.size() ? a : b;
    const Mapping& large = a.size() <= b.size() ? b : a;
    for (const auto& [var, value] : small) {
        auto it = large.find(var);
        if (it != large.end() && it->second != value) return false;
    }
    return true;
}

Mapping merge(const Mapping& a, const Mapping& b) {
    if (!compatible(a, b))
        throw IncompatibleError("cannot merge mappings that disagree on a shared variable");
    Mapping out = a;
    out.insert(b.begin(), b.end());
    return out;
}

bool mapping_less(const Mapping& a, const Mapping& b) {
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ia == a.end() && ib != b.end();
}

MappingSet canonicalize(MappingSet set) {
    std::sort(set.begin(), set.end(), mapping_less);
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

ObjectId WitnessTable::intern(PathWitness w) {
    auto key = std::make_pair(w.objects, w.edges);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    ObjectId id = ObjectId::transient(rows_.size() + 1);
    rows_.push_back(std::move(w));
    index_.emplace(std::move(key), id);
    return id;
}

const PathWitness* WitnessTable::find(ObjectId id) const {
    if (id.tag() != Tag::Transient) return nullptr;
    uint64_t payload = id.payload();
    if (payload == 0 || payload > rows_.size()) return nullptr;
    return &rows_[payload - 1];
}

}  // namespace mdb::algebra
