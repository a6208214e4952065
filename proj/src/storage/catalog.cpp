#include "mdb/storage/catalog.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "mdb/core/errors.hpp"

namespace mdb {

using nlohmann::json;

Catalog Catalog::compute(const ReferenceGraph& g) {
    Catalog c;
    c.object_count = g.objects().size();
    c.edge_count = g.edge_count();
    c.label_pair_count = g.label_count();
    c.prop_pair_count = g.prop_count();

    std::set<ObjectId> sources, targets, types;
    for (const EdgeRecord& e : g.edges()) {
        sources.insert(e.source);
        targets.insert(e.target);
        types.insert(e.type);
        ++c.edges_by_type[e.type.raw];
    }
    c.distinct_sources = sources.size();
    c.distinct_targets = targets.size();
    c.distinct_types = types.size();

    std::set<ObjectId> labels, label_objects;
    for (const auto& [object, label] : g.labels()) {
        labels.insert(label);
        label_objects.insert(object);
        ++c.objects_by_label[label.raw];
    }
    c.distinct_labels = labels.size();
    c.distinct_label_objects = label_objects.size();

    std::set<ObjectId> prop_objects;
    std::map<uint64_t, std::set<ObjectId>> values_by_key;
    for (const auto& [ok, value] : g.props()) {
        prop_objects.insert(ok.first);
        KeyStat& ks = c.props_by_key[ok.second.raw];
        ++ks.count;
        values_by_key[ok.second.raw].insert(value);
    }
    for (auto& [key, ks] : c.props_by_key) ks.distinct_values = values_by_key[key].size();
    c.distinct_prop_keys = c.props_by_key.size();
    c.distinct_prop_objects = prop_objects.size();
    return c;
}

namespace {

json id_map_to_json(const std::map<uint64_t, uint64_t>& m) {
    json j = json::object();
    for (const auto& [id, n] : m) j[std::to_string(id)] = n;
    return j;
}

std::map<uint64_t, uint64_t> id_map_from_json(const json& j) {
    std::map<uint64_t, uint64_t> m;
    for (const auto& [key, value] : j.items()) m[std::stoull(key)] = value.get<uint64_t>();
    return m;
}

}  // namespace

void Catalog::save(const std::filesystem::path& file, uint32_t page_size) const {
    json j;
    j["page_size"] = page_size;
    j["object_count"] = object_count;
    j["edge_count"] = edge_count;
    j["label_pair_count"] = label_pair_count;
    j["prop_pair_count"] = prop_pair_count;
    j["distinct_sources"] = distinct_sources;
    j["distinct_targets"] = distinct_targets;
    j["distinct_types"] = distinct_types;
    j["distinct_labels"] = distinct_labels;
    j["distinct_label_objects"] = distinct_label_objects;
    j["distinct_prop_keys"] = distinct_prop_keys;
    j["distinct_prop_objects"] = distinct_prop_objects;
    j["edges_by_type"] = id_map_to_json(edges_by_type);
    j["objects_by_label"] = id_map_to_json(objects_by_label);
    json props = json::object();
    for (const auto& [key, ks] : props_by_key)
        props[std::to_string(key)] = {{"count", ks.count}, {"distinct_values", ks.distinct_values}};
    j["props_by_key"] = props;

    std::ofstream out(file, std::ios::trunc);
    if (!out) throw StorageError("cannot write catalog file '" + file.string() + "'");
    out << j.dump(2) << '\n';
}

Catalog Catalog::load(const std::filesystem::path& file, uint32_t& page_size_out) {
    std::ifstream in(file);
    if (!in) throw StorageError("cannot read catalog file '" + file.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw CorruptionError("catalog file '" + file.string() + "' is not valid JSON: " + e.what());
    }
    page_size_out = j.at("page_size").get<uint32_t>();
    Catalog c;
    c.object_count = j.at("object_count").get<uint64_t>();
    c.edge_count = j.at("edge_count").get<uint64_t>();
    c.label_pair_count = j.at("label_pair_count").get<uint64_t>();
    c.prop_pair_count = j.at("prop_pair_count").get<uint64_t>();
    c.distinct_sources = j.at("distinct_sources").get<uint64_t>();
    c.distinct_targets = j.at("distinct_targets").get<uint64_t>();
    c.distinct_types = j.at("distinct_types").get<uint64_t>();
    c.distinct_labels = j.at("distinct_labels").get<uint64_t>();
    c.distinct_label_objects = j.at("distinct_label_objects").get<uint64_t>();
    c.distinct_prop_keys = j.at("distinct_prop_keys").get<uint64_t>();
    c.distinct_prop_objects = j.at("distinct_prop_objects").get<uint64_t>();
    c.edges_by_type = id_map_from_json(j.at("edges_by_type"));
    c.objects_by_label = id_map_from_json(j.at("objects_by_label"));
    for (const auto& [key, value] : j.at("props_by_key").items())
        c.props_by_key[std::stoull(key)] = {value.at("count").get<uint64_t>(),
                                            value.at("distinct_values").get<uint64_t>()};
    return c;
}

}  // namespace mdb
