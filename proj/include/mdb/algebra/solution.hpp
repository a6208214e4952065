#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdb/core/object_id.hpp"
#include "mdb/query/ast.hpp"

// Solution mappings and projected result rows. A mapping is a partial
// function from variables to objects; objects extend every mapping by
// identity, so only variable bindings are stored. Mapping sets are kept in
// canonical order (sorted, duplicate-free) so results compare structurally.
namespace mdb::algebra {

using Mapping = std::map<std::string, ObjectId>;

// Compatible iff the mappings agree on every shared variable; mappings with
// disjoint domains are always compatible.
bool compatible(const Mapping& a, const Mapping& b);

// Union extension of two compatible mappings. IncompatibleError otherwise.
Mapping merge(const Mapping& a, const Mapping& b);

// Total order on mappings: by domain and bound values, lexicographically.
bool mapping_less(const Mapping& a, const Mapping& b);

using MappingSet = std::vector<Mapping>;

// Sorts and deduplicates, establishing the canonical representation.
MappingSet canonicalize(MappingSet set);

// One concrete path through the graph. objects has exactly one more entry
// than edges; a zero-length path is a single object with no edges. The edge
// sequence together with the start object determines the object sequence.
struct PathWitness {
    std::vector<ObjectId> objects;
    std::vector<ObjectId> edges;
    friend bool operator==(const PathWitness&, const PathWitness&) = default;
};

// Query-local registry binding transient ids to path witnesses. Interning is
// by content, so equal paths share one id within a query and bindings of the
// same witness compare equal by id.
class WitnessTable {
public:
    ObjectId intern(PathWitness w);
    // The witness behind a transient id from this table, or null.
    const PathWitness* find(ObjectId id) const;
    std::size_t size() const { return rows_.size(); }

private:
    std::vector<PathWitness> rows_;
    std::map<std::pair<std::vector<ObjectId>, std::vector<ObjectId>>, ObjectId> index_;
};

// One projected result row, parallel to a selection-element list. A column is
// null when its variable is unbound or the property is undefined.
struct Row {
    std::vector<std::optional<ObjectId>> values;
    friend bool operator==(const Row&, const Row&) = default;
};

// An ordered multiset of projected rows: duplicates are preserved, and every
// row shares the column set. Witnesses for any transient ids ride along.
struct SolutionSequence {
    std::vector<query::SelectionElement> columns;
    std::vector<Row> rows;
    WitnessTable witnesses;
};

}  // namespace mdb::algebra
