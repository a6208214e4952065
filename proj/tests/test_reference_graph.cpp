#include <gtest/gtest.h>

#include "mdb/core/reference_graph.hpp"
#include "support/fixtures.hpp"

using namespace mdb;
using mdb::testing::FamilyGraph;
using mdb::testing::PositionsGraph;

TEST(ReferenceGraph, EmptyGraph) {
    ReferenceGraph g;
    EXPECT_EQ(g.edge_count(), 0u);
    EXPECT_EQ(g.label_count(), 0u);
    EXPECT_EQ(g.prop_count(), 0u);
    EXPECT_TRUE(g.objects().empty());
    EXPECT_FALSE(g.gamma(ObjectId::edge(0)).has_value());
}

TEST(ReferenceGraph, FamilyExampleShape) {
    FamilyGraph f;
    EXPECT_EQ(f.g.edge_count(), 2u);
    EXPECT_EQ(f.g.label_count(), 2u);
    EXPECT_EQ(f.g.prop_count(), 10u);

    auto e1 = f.g.gamma(f.e1);
    ASSERT_TRUE(e1.has_value());
    EXPECT_EQ(e1->source, f.n1);
    EXPECT_EQ(e1->type, f.father);
    EXPECT_EQ(e1->target, f.n2);

    auto e2 = f.g.gamma(f.e2);
    ASSERT_TRUE(e2.has_value());
    EXPECT_EQ(e2->source, f.n2);
    EXPECT_EQ(e2->type, f.child);
    EXPECT_EQ(e2->target, f.n1);

    // The edge object carries its own property.
    EXPECT_EQ(f.g.prop(f.e2, f.k_order), f.v2);
    EXPECT_FALSE(f.g.prop(f.e1, f.k_order).has_value());
    EXPECT_TRUE(f.g.has_label(f.n1, f.human));
    EXPECT_TRUE(f.g.has_label(f.n2, f.human));

    // Objects: 2 people + 2 edges + 2 types + 1 label + 6 keys + 8 distinct values.
    EXPECT_EQ(f.g.objects().size(), 21u);
}

TEST(ReferenceGraph, EdgeIdsAreConsecutiveFromZero) {
    PositionsGraph p;
    EXPECT_EQ(p.g.edge_count(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
        auto rec = p.g.gamma(ObjectId::edge(i));
        ASSERT_TRUE(rec.has_value());
        EXPECT_EQ(rec->eid, ObjectId::edge(i));
    }
    EXPECT_EQ(p.e1, ObjectId::edge(0));
    EXPECT_EQ(p.e2, ObjectId::edge(5));
}

TEST(ReferenceGraph, QualifierEdgesEmanateFromEdgeObjects) {
    PositionsGraph p;
    // Edges 1..4 qualify statement e1, edges 6..9 qualify statement e2.
    for (std::size_t i : {1u, 2u, 3u, 4u}) EXPECT_EQ(p.g.gamma(ObjectId::edge(i))->source, p.e1);
    for (std::size_t i : {6u, 7u, 8u, 9u}) EXPECT_EQ(p.g.gamma(ObjectId::edge(i))->source, p.e2);
    EXPECT_EQ(p.g.gamma(ObjectId::edge(1))->target, p.d2014);
    EXPECT_EQ(p.g.gamma(ObjectId::edge(6))->target, p.d2006);
    EXPECT_EQ(p.g.gamma(ObjectId::edge(8))->target, p.lagos);
}

TEST(ReferenceGraph, DuplicatePropertySameValueIsIdempotent) {
    FamilyGraph f;
    EXPECT_NO_THROW(f.g.set_prop(f.n1, f.k_gender, f.v_female));
    EXPECT_EQ(f.g.prop_count(), 10u);
}

TEST(ReferenceGraph, ConflictingPropertyValueThrows) {
    FamilyGraph f;
    EXPECT_THROW(f.g.set_prop(f.n1, f.k_gender, f.v_male), PropertyConflictError);
}

TEST(ReferenceGraph, DuplicateLabelAndEdgeBehaviour) {
    FamilyGraph f;
    f.g.add_label(f.n1, f.human);  // labels form a set
    EXPECT_EQ(f.g.label_count(), 2u);
    // Identical connectivity triples get distinct edge ids.
    ObjectId extra = f.g.add_edge(f.n1, f.father, f.n2);
    EXPECT_NE(extra, f.e1);
    EXPECT_EQ(f.g.edge_count(), 3u);
}
