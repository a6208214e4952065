#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "mdb/core/errors.hpp"
#include "mdb/storage/database.hpp"
#include "support/fixtures.hpp"
#include "support/random_graphs.hpp"
#include "support/temp_dir.hpp"

using namespace mdb;
using mdb::testing::FamilyGraph;
using mdb::testing::PositionsGraph;
using mdb::testing::random_graph;
using mdb::testing::RandomGraphSpec;
using mdb::testing::TempDir;
using Record = BPlusTree::Record;

namespace {

std::vector<Record> drain(BPlusTree::Iterator it) {
    std::vector<Record> out;
    for (; it.valid(); it.next()) out.push_back(it.record());
    return out;
}

// Normalizes a connectivity record from any of the four stored orders back
// to (source, type, target, eid) using the edge id's authoritative triple.
std::multiset<std::array<uint64_t, 4>> edge_multiset(Database& db, TreeId t) {
    std::multiset<std::array<uint64_t, 4>> out;
    for (const Record& r : drain(db.tree(t).scan_all())) {
        ObjectId eid = r[3];
        EdgeRecord e = db.edge_lookup(eid);
        // The record must mention exactly the triple's ids.
        std::multiset<uint64_t> cols{r[0].raw, r[1].raw, r[2].raw};
        std::multiset<uint64_t> ref{e.source.raw, e.type.raw, e.target.raw};
        EXPECT_EQ(cols, ref);
        out.insert({e.source.raw, e.type.raw, e.target.raw, eid.raw});
    }
    return out;
}

void expect_graphs_equal(const ReferenceGraph& a, const ReferenceGraph& b) {
    ASSERT_EQ(a.edges().size(), b.edges().size());
    for (std::size_t i = 0; i < a.edges().size(); ++i)
        EXPECT_TRUE(a.edges()[i] == b.edges()[i]) << "edge " << i;
    EXPECT_EQ(a.labels(), b.labels());
    EXPECT_EQ(a.props(), b.props());
    EXPECT_EQ(a.objects(), b.objects());
}

}  // namespace

TEST(Database, CreateRefusesExistingAndOpenRefusesMissing) {
    TempDir dir;
    auto db = Database::create(dir / "db");
    EXPECT_EQ(db->edges().count(), 0u);
    for (unsigned t = 0; t < kTreeCount; ++t)
        EXPECT_EQ(db->tree(TreeId(t)).record_count(), 0u);
    EXPECT_THROW(Database::create(dir / "db"), StorageError);
    EXPECT_THROW(Database::open(dir / "nothing-here"), StorageError);
}

TEST(Database, StoreFamilyGraphBuildsAllRelations) {
    TempDir dir;
    auto db = Database::create(dir / "db");
    FamilyGraph f(db->names());
    db->store_graph(f.g);

    EXPECT_EQ(db->edges().count(), 2u);
    EXPECT_EQ(db->tree(TreeId::Objects).record_count(), 21u);
    for (TreeId t : {TreeId::DgStye, TreeId::DgTyse, TreeId::DgYste, TreeId::DgYtse})
        EXPECT_EQ(db->tree(t).record_count(), 2u);
    for (TreeId t : {TreeId::LabelsOL, TreeId::LabelsLO})
        EXPECT_EQ(db->tree(t).record_count(), 2u);
    for (TreeId t : {TreeId::PropsOPV, TreeId::PropsPVO})
        EXPECT_EQ(db->tree(t).record_count(), 10u);

    // Spot checks against known content.
    auto out_n1 = drain(db->tree(TreeId::DgStye).prefix_scan({f.n1}, 1));
    ASSERT_EQ(out_n1.size(), 1u);
    EXPECT_EQ(out_n1[0][1], f.n2);      // target
    EXPECT_EQ(out_n1[0][2], f.father);  // type
    EXPECT_EQ(out_n1[0][3], f.e1);

    auto order_prop = drain(db->tree(TreeId::PropsOPV).prefix_scan({f.e2, f.k_order}, 2));
    ASSERT_EQ(order_prop.size(), 1u);
    EXPECT_EQ(order_prop[0][2], f.v2);

    auto humans = drain(db->tree(TreeId::LabelsLO).prefix_scan({f.human}, 1));
    ASSERT_EQ(humans.size(), 2u);
    EXPECT_EQ(humans[0][1], std::min(f.n1, f.n2));
    EXPECT_EQ(humans[1][1], std::max(f.n1, f.n2));

    const Catalog& c = db->catalog();
    EXPECT_EQ(c.object_count, 21u);
    EXPECT_EQ(c.edge_count, 2u);
    EXPECT_EQ(c.label_pair_count, 2u);
    EXPECT_EQ(c.prop_pair_count, 10u);
    EXPECT_EQ(c.distinct_labels, 1u);
    EXPECT_EQ(c.distinct_types, 2u);
}

TEST(Database, MirrorRoundTripsTheFamilyGraph) {
    TempDir dir;
    auto db = Database::create(dir / "db");
    FamilyGraph f(db->names());
    db->store_graph(f.g);
    ReferenceGraph back = mirror_database(*db);
    expect_graphs_equal(f.g, back);
}

TEST(Database, ReopenSeesIdenticalContent) {
    TempDir dir;
    ReferenceGraph original;
    {
        auto db = Database::create(dir / "db", {.page_size = 1024, .buffer_pages = 64});
        PositionsGraph p(db->names());
        db->store_graph(p.g);
        original = p.g;
        db->flush();
    }
    // The stored page size wins over whatever the open passes.
    auto db = Database::open(dir / "db", {.page_size = 4096, .buffer_pages = 32});
    EXPECT_EQ(db->page_size(), 1024u);
    EXPECT_EQ(db->edges().count(), 10u);
    EXPECT_EQ(db->catalog().edge_count, 10u);
    ReferenceGraph back = mirror_database(*db);
    expect_graphs_equal(original, back);

    // Ids survive too: the name dictionary must resolve to the same strings.
    auto mb = db->find_named("Michelle Bachelet");
    ASSERT_TRUE(mb.has_value());
    EXPECT_EQ(original.edges()[0].source, *mb);
}

TEST(Database, FourPermutationsHoldTheSameEdges) {
    TempDir dir;
    std::mt19937_64 rng(41);
    RandomGraphSpec spec;
    spec.max_edges = 60;
    spec.max_nodes = 10;
    for (int round = 0; round < 15; ++round) {
        auto db = Database::create(dir / ("db" + std::to_string(round)),
                                   {.page_size = 512, .buffer_pages = 64});
        ReferenceGraph g = random_graph(rng, db->names(), spec);
        db->store_graph(g);

        std::multiset<std::array<uint64_t, 4>> expect;
        for (const EdgeRecord& e : g.edges())
            expect.insert({e.source.raw, e.type.raw, e.target.raw, e.eid.raw});

        for (TreeId t : {TreeId::DgStye, TreeId::DgTyse, TreeId::DgYste, TreeId::DgYtse})
            EXPECT_EQ(edge_multiset(*db, t), expect) << "round " << round;
    }
}

TEST(Database, EdgeLookupAgreesWithTreeScan) {
    TempDir dir;
    std::mt19937_64 rng(42);
    RandomGraphSpec spec;
    spec.max_nodes = 30;
    spec.min_nodes = 30;
    spec.max_edges = 1000;
    auto db = Database::create(dir / "db");
    ReferenceGraph g = random_graph(rng, db->names(), spec);
    db->store_graph(g);
    ASSERT_GE(db->edges().count(), 100u);

    std::map<uint64_t, std::array<uint64_t, 3>> from_tree;
    for (const Record& r : drain(db->tree(TreeId::DgYste).scan_all()))
        from_tree[r[3].raw] = {r[1].raw, r[0].raw, r[2].raw};  // (s, y, t) from (y, s, t, e)
    ASSERT_EQ(from_tree.size(), db->edges().count());

    for (const auto& [eid_raw, syt] : from_tree) {
        EdgeRecord e = db->edge_lookup(ObjectId(eid_raw));
        EXPECT_EQ(e.source.raw, syt[0]);
        EXPECT_EQ(e.type.raw, syt[1]);
        EXPECT_EQ(e.target.raw, syt[2]);
    }
    EXPECT_THROW(db->edge_lookup(ObjectId::edge(db->edges().count())), UnknownEdgeError);
}

TEST(Database, StoreGraphRequiresEmptyDatabase) {
    TempDir dir;
    auto db = Database::create(dir / "db");
    FamilyGraph f(db->names());
    db->store_graph(f.g);
    EXPECT_THROW(db->store_graph(f.g), StorageError);
}

TEST(Database, FindProbesNeverIntern) {
    TempDir dir;
    auto db = Database::create(dir / "db");
    FamilyGraph f(db->names());
    db->store_graph(f.g);
    std::size_t entries = db->names().entry_count();

    EXPECT_EQ(db->find_named("n1"), std::optional<ObjectId>(f.n1));
    EXPECT_EQ(db->find_string("female"), std::optional<ObjectId>(f.v_female));
    // Short strings come back inlined without touching the dictionary.
    EXPECT_EQ(db->find_string("ab"), std::optional<ObjectId>(ObjectId::inline_string("ab")));
    EXPECT_EQ(db->find_named("no such node"), std::nullopt);
    EXPECT_EQ(db->find_string("no such string value"), std::nullopt);
    EXPECT_EQ(db->names().entry_count(), entries);
}

TEST(Database, SmallBufferPoolSurvivesManyProbes) {
    TempDir dir;
    std::mt19937_64 rng(43);
    RandomGraphSpec spec;
    spec.min_nodes = 40;
    spec.max_nodes = 40;
    spec.max_edges = 2000;
    spec.max_labels = 200;
    spec.max_props = 400;
    ReferenceGraph g;
    {
        auto db = Database::create(dir / "db", {.page_size = 512, .buffer_pages = 64});
        g = random_graph(rng, db->names(), spec);
        db->store_graph(g);
        db->flush();
    }
    auto db = Database::open(dir / "db", {.buffer_pages = 16});
    uint64_t edge_count = db->edges().count();
    ASSERT_GT(edge_count, 0u);
    for (int i = 0; i < 10000; ++i) {
        EXPECT_LE(db->pool().resident_count(), 16u);
        ObjectId eid = ObjectId::edge(rng() % edge_count);
        EdgeRecord e = db->edge_lookup(eid);
        bool found = false;
        for (auto it = db->tree(TreeId::DgStye).prefix_scan({e.source, e.target}, 2);
             it.valid(); it.next())
            found |= it.record()[3] == eid;
        EXPECT_TRUE(found);
        if (i % 3 == 0) {
            auto it = db->tree(TreeId::PropsOPV).prefix_scan({e.source}, 1);
            while (it.valid()) it.next();
        }
    }
    EXPECT_EQ(db->pool().pinned_count(), 0u);
}
