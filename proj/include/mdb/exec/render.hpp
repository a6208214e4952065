#pragma once

#include <string>

#include "mdb/algebra/solution.hpp"
#include "mdb/storage/database.hpp"

namespace mdb::exec {

// Display form of one stored value: named nodes by their name, strings in
// double quotes, integers as digits, edges as _eN, anonymous nodes as _aN.
// A path binding (transient id with a witness) serializes the whole path,
// (o1)-[e,f]->(o2)-..., with f/b telling whether each edge was walked along
// or against its stored direction.
std::string render_value(ObjectId id, Database& db, const algebra::WitnessTable* witnesses);

inline std::string render_value(ObjectId id, Database& db) {
    return render_value(id, db, nullptr);
}

}  // namespace mdb::exec
