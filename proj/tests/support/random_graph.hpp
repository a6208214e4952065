#pragma once

#include <random>
#include <string>
#include <vector>

#include "mdb/core/reference_graph.hpp"
#include "mdb/core/value.hpp"
#include "mdb/query/query.hpp"

// Deterministic random graphs and path expressions for property-style tests.
namespace mdb::testing {

struct RandomGraphOptions {
    int min_nodes = 2;
    int max_nodes = 15;
    int max_edges = 30;
    int type_count = 3;
    int label_count = 2;
    int key_count = 3;
    bool qualifier_edges = true;  // allow edges whose source is an edge object
};

struct RandomGraph {
    ReferenceGraph g;
    std::vector<ObjectId> nodes;   // named node objects
    std::vector<ObjectId> types;   // edge type name objects
    std::vector<ObjectId> labels;  // label string objects
    std::vector<ObjectId> keys;    // property key string objects
    std::vector<ObjectId> values;  // property value pool (strings and ints)
};

inline RandomGraph make_random_graph(std::mt19937& rng, ValueDict& dict,
                                     const RandomGraphOptions& opt = {}) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    RandomGraph out;
    int node_count = opt.min_nodes + pick(opt.max_nodes - opt.min_nodes + 1);
    for (int i = 0; i < node_count; ++i) {
        ObjectId node = ObjectId::named_node(dict.intern("rn" + std::to_string(i)));
        out.nodes.push_back(node);
        out.g.add_object(node);
    }
    for (int i = 0; i < opt.type_count; ++i)
        out.types.push_back(ObjectId::named_node(dict.intern("rt" + std::to_string(i))));
    for (int i = 0; i < opt.label_count; ++i)
        out.labels.push_back(encode_string("rlabel" + std::to_string(i), dict));
    for (int i = 0; i < opt.key_count; ++i)
        out.keys.push_back(encode_string("rkey" + std::to_string(i), dict));
    out.values.push_back(encode_string("blue", dict));
    out.values.push_back(encode_string("a longer value string", dict));
    out.values.push_back(encode_int(7));
    out.values.push_back(encode_int(-3));

    int edge_count = pick(opt.max_edges + 1);
    std::vector<ObjectId> edge_pool;
    for (int i = 0; i < edge_count; ++i) {
        ObjectId source = out.nodes[pick(static_cast<int>(out.nodes.size()))];
        if (opt.qualifier_edges && !edge_pool.empty() && pick(4) == 0)
            source = edge_pool[pick(static_cast<int>(edge_pool.size()))];
        ObjectId target = out.nodes[pick(static_cast<int>(out.nodes.size()))];
        ObjectId type = out.types[pick(static_cast<int>(out.types.size()))];
        edge_pool.push_back(out.g.add_edge(source, type, target));
    }
    for (ObjectId node : out.nodes) {
        if (pick(3) == 0) out.g.add_label(node, out.labels[pick(static_cast<int>(out.labels.size()))]);
        if (pick(3) == 0)
            out.g.set_prop(node, out.keys[pick(static_cast<int>(out.keys.size()))],
                           out.values[pick(static_cast<int>(out.values.size()))]);
    }
    return out;
}

// Random path expression over the given types; depth bounds the nesting.
inline query::RpqExprPtr make_random_rpq(std::mt19937& rng, const std::vector<ObjectId>& types,
                                         int depth) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    using K = query::Rpq::Kind;
    if (depth <= 0 || pick(3) == 0) {
        if (pick(8) == 0) return query::make_path_epsilon();
        return query::make_path_type(types[pick(static_cast<int>(types.size()))]);
    }
    switch (pick(4)) {
        case 0:
            return query::make_path(K::Concat, make_random_rpq(rng, types, depth - 1),
                                    make_random_rpq(rng, types, depth - 1));
        case 1:
            return query::make_path(K::Alternation, make_random_rpq(rng, types, depth - 1),
                                    make_random_rpq(rng, types, depth - 1));
        case 2:
            return query::make_path(K::Inverse, make_random_rpq(rng, types, depth - 1));
        default:
            return query::make_path(K::Star, make_random_rpq(rng, types, depth - 1));
    }
}

}  // namespace mdb::testing
