#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mdb/core/object_id.hpp"
#include "mdb/core/value.hpp"

// In-memory form of a property domain graph G = (O, gamma, lab, prop):
// the connectivity function gamma maps edge ids to (source, type, target)
// triples, lab and prop annotate arbitrary objects, and O collects every id
// mentioned anywhere. Edges are first-class objects, so a triple may use an
// edge id in any position (that is how qualifiers attach to statements).
//
// This form is the correctness baseline: the ingest pipeline builds it, the
// storage layer persists it, and the algebra oracle evaluates against it.
namespace mdb {

struct EdgeRecord {
    ObjectId source, type, target, eid;
    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

class ReferenceGraph {
public:
    // Appends a connectivity triple; edge ids are consecutive from 0 in
    // creation order. Returns the new edge object's id.
    ObjectId add_edge(ObjectId source, ObjectId type, ObjectId target) {
        ObjectId eid = ObjectId::edge(edges_.size());
        edges_.push_back({source, type, target, eid});
        note(source); note(type); note(target); note(eid);
        return eid;
    }

    void add_label(ObjectId object, ObjectId label) {
        labels_.emplace(object, label);
        note(object); note(label);
    }

    // Registers an object with no edges or annotations (a bare mention).
    void add_object(ObjectId object) { note(object); }

    // Sets prop(object, key) = value; at most one value per (object, key).
    // Re-asserting the same value is a no-op, a different value is an error.
    void set_prop(ObjectId object, ObjectId key, ObjectId value) {
        auto [it, inserted] = props_.try_emplace({object, key}, value);
        if (!inserted && it->second != value)
            throw PropertyConflictError("conflicting values for one (object, property) pair");
        note(object); note(key); note(value);
    }

    std::optional<EdgeRecord> gamma(ObjectId eid) const {
        if (!eid.is_edge() || eid.payload() >= edges_.size()) return std::nullopt;
        return edges_[eid.payload()];
    }

    std::optional<ObjectId> prop(ObjectId object, ObjectId key) const {
        auto it = props_.find({object, key});
        if (it == props_.end()) return std::nullopt;
        return it->second;
    }

    bool has_label(ObjectId object, ObjectId label) const {
        return labels_.count({object, label}) != 0;
    }

    const std::vector<EdgeRecord>& edges() const { return edges_; }
    const std::set<std::pair<ObjectId, ObjectId>>& labels() const { return labels_; }
    const std::map<std::pair<ObjectId, ObjectId>, ObjectId>& props() const { return props_; }
    const std::set<ObjectId>& objects() const { return objects_; }

    std::size_t edge_count() const { return edges_.size(); }
    std::size_t label_count() const { return labels_.size(); }
    std::size_t prop_count() const { return props_.size(); }

private:
    void note(ObjectId id) { objects_.insert(id); }

    std::vector<EdgeRecord> edges_;
    std::set<std::pair<ObjectId, ObjectId>> labels_;
    std::map<std::pair<ObjectId, ObjectId>, ObjectId> props_;
    std::set<ObjectId> objects_;
};

}  // namespace mdb
