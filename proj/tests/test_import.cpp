#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "mdb/core/errors.hpp"
#include "mdb/ingest/import.hpp"
#include "support/temp_dir.hpp"

using namespace mdb;
using mdb::testing::TempDir;
using Kind = ImportStatement::Kind;
using TermKind = ImportTerm::Kind;

namespace {

std::string fixture_text(const char* name) {
    std::ifstream in(std::filesystem::path(MDB_FIXTURE_DIR) / name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path fixture_path(const char* name) {
    return std::filesystem::path(MDB_FIXTURE_DIR) / name;
}

}  // namespace

TEST(ImportParser, ParsesNodeStatement) {
    auto stmts = parse_import(R"((n1) :human {children : "3"})");
    ASSERT_EQ(stmts.size(), 1u);
    const auto& s = stmts[0];
    EXPECT_EQ(s.kind, Kind::Node);
    EXPECT_EQ(s.subject.kind, TermKind::Name);
    EXPECT_EQ(s.subject.text, "n1");
    ASSERT_EQ(s.labels.size(), 1u);
    EXPECT_EQ(s.labels[0], "human");
    ASSERT_EQ(s.props.size(), 1u);
    EXPECT_EQ(s.props[0].first, "children");
    EXPECT_EQ(s.props[0].second.kind, TermKind::Quoted);
    EXPECT_EQ(s.props[0].second.text, "3");
}

TEST(ImportParser, AliasDeclarationThenQualifierReference) {
    auto stmts = parse_import("e1 = (Q320)-[P39]->(Q466956)\n(e1)-[P580]->(\"2014-03-11\")");
    ASSERT_EQ(stmts.size(), 2u);
    EXPECT_EQ(stmts[0].kind, Kind::Edge);
    EXPECT_EQ(stmts[0].alias, "e1");
    EXPECT_EQ(stmts[0].subject.text, "Q320");
    EXPECT_EQ(stmts[0].type.text, "P39");
    EXPECT_EQ(stmts[1].kind, Kind::Edge);
    EXPECT_TRUE(stmts[1].alias.empty());
    EXPECT_EQ(stmts[1].subject.kind, TermKind::AliasRef);
    EXPECT_EQ(stmts[1].subject.text, "e1");
    EXPECT_EQ(stmts[1].target.kind, TermKind::Quoted);
    EXPECT_EQ(stmts[1].target.text, "2014-03-11");
}

TEST(ImportParser, TruncatedEdgeIsASyntaxError) {
    EXPECT_THROW(parse_import("(x)-[t]->"), ImportError);
    EXPECT_THROW(parse_import("(x)-[t]"), ImportError);
    EXPECT_THROW(parse_import("(x)-[t->(y)"), ImportError);
    EXPECT_THROW(parse_import("(x"), ImportError);
    try {
        parse_import("(ok)-[t]->(fine)\n(x)-[t]->");
        FAIL() << "expected ImportError";
    } catch (const ImportError& e) {
        EXPECT_EQ(e.line_no, 2u);
    }
}

TEST(ImportParser, CommentsAndBlankLinesAreSkipped) {
    auto stmts = parse_import("# header\n\n(n) {k : \"a#b\"}  # trailing\n   \n# end\n");
    ASSERT_EQ(stmts.size(), 1u);
    EXPECT_EQ(stmts[0].line, 3);
    ASSERT_EQ(stmts[0].props.size(), 1u);
    EXPECT_EQ(stmts[0].props[0].second.text, "a#b");
}

TEST(ImportParser, NamesMayContainSpaces) {
    auto stmts =
        parse_import("(Michelle Bachelet)-[position held]->(President of Chile)");
    ASSERT_EQ(stmts.size(), 1u);
    EXPECT_EQ(stmts[0].subject.text, "Michelle Bachelet");
    EXPECT_EQ(stmts[0].type.text, "position held");
    EXPECT_EQ(stmts[0].target.text, "President of Chile");
    auto keyed = parse_import("(n) {first name : \"Michelle\"}");
    EXPECT_EQ(keyed[0].props[0].first, "first name");
}

TEST(ImportParser, ValueTermsAndEscapes) {
    auto stmts = parse_import("(n)-[t]->(42)\n(n)-[t]->(-17)\n(n)-[t]->(\"a\\\"b\\\\c\\n\")");
    EXPECT_EQ(stmts[0].target.kind, TermKind::Integer);
    EXPECT_EQ(stmts[0].target.number, 42);
    EXPECT_EQ(stmts[1].target.number, -17);
    EXPECT_EQ(stmts[2].target.kind, TermKind::Quoted);
    EXPECT_EQ(stmts[2].target.text, "a\"b\\c\n");
    auto props = parse_import("(n) {k : 7, m : \"x\"}");
    EXPECT_EQ(props[0].props[0].second.kind, TermKind::Integer);
    EXPECT_EQ(props[0].props[0].second.number, 7);
    EXPECT_THROW(parse_import("(n) {k : bare}"), ImportError);
}

TEST(ImportParser, AliasDiscipline) {
    EXPECT_THROW(parse_import("e = (a)-[t]->(b)\ne = (c)-[t]->(d)"), DuplicateAliasError);
    // A name used as a plain term cannot later become an alias.
    EXPECT_THROW(parse_import("(x)-[t]->(y)\nx = (a)-[t]->(b)"), UndeclaredAliasError);
    // Not even inside its own declaration.
    EXPECT_THROW(parse_import("e = (e)-[t]->(x)"), UndeclaredAliasError);
    // Aliases are for edge statements only.
    EXPECT_THROW(parse_import("a = (n)"), ImportError);
    // Subjects of node statements must be names.
    EXPECT_THROW(parse_import("(\"s\") :l"), ImportError);
    EXPECT_THROW(parse_import("(42) :l"), ImportError);
}

TEST(ImportParser, TrailingTextRejected) {
    EXPECT_THROW(parse_import("(a) xyz"), ImportError);
    EXPECT_THROW(parse_import("(a)-[t]->(b) (c)"), ImportError);
    EXPECT_THROW(parse_import("(a) {k : \"v\"} extra"), ImportError);
}

TEST(ImportBuilder, BuildsTheFamilyGraph) {
    InMemoryDict dict;
    ReferenceGraph g = build_import_graph(parse_import(fixture_text("fig1.dg")), dict);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.label_count(), 2u);
    EXPECT_EQ(g.prop_count(), 10u);
    EXPECT_EQ(g.objects().size(), 21u);

    ObjectId n1 = ObjectId::named_node(*dict.lookup("n1"));
    ObjectId n2 = ObjectId::named_node(*dict.lookup("n2"));
    ObjectId father = ObjectId::named_node(*dict.lookup("father"));
    ObjectId child = ObjectId::named_node(*dict.lookup("child"));
    EXPECT_EQ(g.edges()[0].source, n1);
    EXPECT_EQ(g.edges()[0].type, father);
    EXPECT_EQ(g.edges()[0].target, n2);
    EXPECT_EQ(g.edges()[1].source, n2);
    EXPECT_EQ(g.edges()[1].type, child);
    EXPECT_EQ(g.edges()[1].target, n1);
    EXPECT_TRUE(g.has_label(n1, encode_string("human", dict)));
    EXPECT_EQ(g.prop(g.edges()[1].eid, encode_string("order", dict)),
              std::optional<ObjectId>(encode_string("2", dict)));
    EXPECT_EQ(g.prop(n2, encode_string("death", dict)),
              std::optional<ObjectId>(encode_string("12 March 1974", dict)));
}

TEST(ImportBuilder, AnonymousNodesNumberByFirstAppearance) {
    InMemoryDict dict;
    ReferenceGraph g =
        build_import_graph(parse_import("(_x)-[t]->(_y)\n(_x)-[t]->(_z)\n(_w)"), dict);
    EXPECT_EQ(g.edges()[0].source, ObjectId::anon_node(0));
    EXPECT_EQ(g.edges()[0].target, ObjectId::anon_node(1));
    EXPECT_EQ(g.edges()[1].source, ObjectId::anon_node(0));
    EXPECT_EQ(g.edges()[1].target, ObjectId::anon_node(2));
    EXPECT_TRUE(g.objects().count(ObjectId::anon_node(3)));  // the bare (_w)
}

TEST(ImportBuilder, PropertyConflictCarriesTheLine) {
    InMemoryDict dict;
    try {
        build_import_graph(parse_import("(n) {k : \"a\"}\n(n) {k : \"b\"}"), dict);
        FAIL() << "expected ImportError";
    } catch (const ImportError& e) {
        EXPECT_EQ(e.line_no, 2u);
    }
    // Re-asserting the same value is fine.
    ReferenceGraph g =
        build_import_graph(parse_import("(n) {k : \"a\"}\n(n) {k : \"a\"}"), dict);
    EXPECT_EQ(g.prop_count(), 1u);
}

TEST(Import, FamilyFixtureEndToEnd) {
    TempDir dir;
    ImportStats stats = import_file(fixture_path("fig1.dg"), dir / "db");
    EXPECT_EQ(stats.objects, 21u);
    EXPECT_EQ(stats.edges, 2u);
    EXPECT_EQ(stats.labels, 2u);
    EXPECT_EQ(stats.properties, 10u);
    EXPECT_EQ(stats.to_json(),
              R"({"edges":2,"labels":2,"objects":21,"properties":10})");

    auto db = Database::open(dir / "db");
    auto n1 = db->find_named("n1");
    ASSERT_TRUE(n1.has_value());
    EdgeRecord e0 = db->edge_lookup(ObjectId::edge(0));
    EXPECT_EQ(e0.source, *n1);
    EXPECT_EQ(e0.type, db->find_named("father"));
}

TEST(Import, PositionsFixtureEndToEnd) {
    TempDir dir;
    ImportStats stats = import_file(fixture_path("fig5.dg"), dir / "db");
    EXPECT_EQ(stats.edges, 10u);
    EXPECT_EQ(stats.labels, 0u);
    EXPECT_EQ(stats.properties, 0u);

    auto db = Database::open(dir / "db");
    EdgeRecord e0 = db->edge_lookup(ObjectId::edge(0));
    EXPECT_EQ(e0.source, db->find_named("Michelle Bachelet"));
    EXPECT_EQ(e0.target, db->find_named("President of Chile"));
    // The first statement's start-date qualifier reads 2014-03-11.
    ReferenceGraph g = mirror_database(*db);
    ObjectId start = *db->find_named("start date");
    ObjectId date14 = *db->find_string("2014-03-11");
    bool found = false;
    for (const EdgeRecord& e : g.edges())
        found |= e.source == ObjectId::edge(0) && e.type == start && e.target == date14;
    EXPECT_TRUE(found);
}

TEST(Import, EmptyFileMakesAnEmptyValidDatabase) {
    TempDir dir;
    ImportStats stats = import_text("", dir / "db");
    EXPECT_EQ(stats.objects, 0u);
    EXPECT_EQ(stats.edges, 0u);
    auto db = Database::open(dir / "db");
    EXPECT_EQ(db->edges().count(), 0u);
    EXPECT_EQ(db->tree(TreeId::Objects).record_count(), 0u);
}

TEST(Import, SameFileTwiceYieldsIdenticalBytes) {
    TempDir dir;
    std::string text = fixture_text("fig5.dg");
    import_text(text, dir / "a");
    import_text(text, dir / "b");
    const char* files[] = {"catalog.json",  "objects.of",   "edges.et",    "objects.bt",
                           "dg_stye.bt",    "dg_tyse.bt",   "dg_yste.bt",  "dg_ytse.bt",
                           "labels_ol.bt",  "labels_lo.bt", "props_opv.bt", "props_pvo.bt"};
    for (const char* f : files) {
        std::ifstream fa(dir / "a" / f, std::ios::binary);
        std::ifstream fb(dir / "b" / f, std::ios::binary);
        ASSERT_TRUE(fa && fb) << f;
        std::string a((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
        std::string b((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
        EXPECT_EQ(a, b) << f;
    }
}

TEST(Import, AbortsAtomically) {
    TempDir dir;
    // Parse errors happen before anything touches disk.
    EXPECT_THROW(import_text("(a)-[t]->", dir / "db"), ImportError);
    EXPECT_FALSE(std::filesystem::exists(dir / "db"));

    // Errors after parsing remove the partial database but keep a directory
    // that existed beforehand, along with foreign files in it.
    std::filesystem::create_directories(dir / "pre");
    { std::ofstream(dir / "pre" / "keep.txt") << "mine"; }
    EXPECT_THROW(import_text("(n) {k : \"a\"}\n(n) {k : \"b\"}", dir / "pre"), ImportError);
    EXPECT_TRUE(std::filesystem::exists(dir / "pre" / "keep.txt"));
    EXPECT_FALSE(std::filesystem::exists(dir / "pre" / "catalog.json"));
    EXPECT_FALSE(std::filesystem::exists(dir / "pre" / "objects.bt"));

    // The cleaned directory accepts a later import.
    ImportStats stats = import_text("(n) {k : \"a\"}", dir / "pre");
    EXPECT_EQ(stats.properties, 1u);
    EXPECT_TRUE(std::filesystem::exists(dir / "pre" / "keep.txt"));
}

TEST(Import, RefusesAnExistingDatabase) {
    TempDir dir;
    import_text("(a)-[t]->(b)", dir / "db");
    EXPECT_THROW(import_text("(c)-[t]->(d)", dir / "db"), StorageError);
    auto db = Database::open(dir / "db");
    EXPECT_EQ(db->edge_lookup(ObjectId::edge(0)).source, db->find_named("a"));
}

TEST(Import, ExportRoundTripsTheFixtures) {
    for (const char* fx : {"fig1.dg", "fig5.dg"}) {
        TempDir dir;
        import_file(fixture_path(fx), dir / "one");
        auto db1 = Database::open(dir / "one");
        std::string text1 = export_text(*db1);

        ImportStats s1 = import_text(text1, dir / "two");
        auto db2 = Database::open(dir / "two");
        EXPECT_EQ(s1.objects, db1->catalog().object_count) << fx;
        EXPECT_EQ(s1.edges, db1->catalog().edge_count) << fx;
        EXPECT_EQ(s1.labels, db1->catalog().label_pair_count) << fx;
        EXPECT_EQ(s1.properties, db1->catalog().prop_pair_count) << fx;
        EXPECT_EQ(export_text(*db2), text1) << fx;
    }
}

TEST(Import, ExportRoundTripCoversEveryConstruct) {
    const char* text =
        "(lonely)\n"
        "(_a)-[t]->(_b)\n"
        "x = (a)-[knows]->(b) {weight : 3, since : \"a while \\\"ago\\\"\"}\n"
        "(x) :certified :vetted\n"
        "(b)-[t]->(\"value string that is external\")\n"
        "(x)-[refines]->(b)\n"
        "(n) :l1 {k1 : \"v\", k2 : -7, long key name : \"w\"}\n"
        "(_a) {weight : 12}\n";
    TempDir dir;
    ImportStats s0 = import_text(text, dir / "one");
    auto db1 = Database::open(dir / "one");
    std::string e1 = export_text(*db1);

    ImportStats s1 = import_text(e1, dir / "two");
    auto db2 = Database::open(dir / "two");
    std::string e2 = export_text(*db2);
    EXPECT_EQ(e1, e2);
    EXPECT_EQ(s0.objects, s1.objects);
    EXPECT_EQ(s0.edges, s1.edges);
    EXPECT_EQ(s0.labels, s1.labels);
    EXPECT_EQ(s0.properties, s1.properties);

    // The lonely named node and the annotated anonymous node survive.
    EXPECT_TRUE(db2->find_named("lonely").has_value());
    ReferenceGraph g2 = mirror_database(*db2);
    EXPECT_TRUE(g2.objects().count(*db2->find_named("lonely")));
    bool anon_with_weight = false;
    for (const auto& [ok, value] : g2.props())
        anon_with_weight |= ok.first.is_anon_node() && value == encode_int(12);
    EXPECT_TRUE(anon_with_weight);
}
