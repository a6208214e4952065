#include <algorithm>
#include <fstream>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mdb/core/errors.hpp"
#include "mdb/storage/bplus_tree.hpp"
#include "support/temp_dir.hpp"

using namespace mdb;
using Record = BPlusTree::Record;

namespace {

Record rec(uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
    return {ObjectId::named_node(a), ObjectId::named_node(b), ObjectId::named_node(c),
            ObjectId::named_node(d)};
}

std::vector<Record> random_records(std::mt19937_64& rng, std::size_t n, uint32_t arity,
                                   uint64_t domain) {
    std::uniform_int_distribution<uint64_t> dist(0, domain - 1);
    std::vector<Record> out(n);
    for (auto& r : out)
        for (uint32_t c = 0; c < arity; ++c) r[c] = ObjectId::named_node(dist(rng));
    return out;
}

void sort_records(std::vector<Record>& v, uint32_t arity) {
    std::sort(v.begin(), v.end(), [arity](const Record& a, const Record& b) {
        return BPlusTree::compare(a, b, arity) < 0;
    });
}

std::vector<Record> drain(BPlusTree::Iterator it) {
    std::vector<Record> out;
    for (; it.valid(); it.next()) out.push_back(it.record());
    return out;
}

struct Env {
    Env(uint32_t page_size = 4096, std::size_t frames = 64)
        : fm(page_size), pool(fm, frames) {}
    mdb::testing::TempDir dir;
    FileManager fm;
    BufferPool pool;

    std::filesystem::path path(const char* name) { return dir / name; }
};

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST(BPlusTree, EmptyTreeScansNothing) {
    Env env;
    auto p = env.path("t.bt");
    BPlusTree::create_empty(env.fm, env.pool, p, 2);
    BPlusTree tree(env.fm, env.pool, p);
    EXPECT_EQ(tree.arity(), 2u);
    EXPECT_EQ(tree.record_count(), 0u);
    EXPECT_EQ(tree.height(), 0u);
    EXPECT_FALSE(tree.scan_all().valid());
    EXPECT_FALSE(tree.lower_bound(rec(0)).valid());
    EXPECT_FALSE(tree.prefix_scan(rec(7), 1).valid());
}

TEST(BPlusTree, BulkLoadMatchesSortedInput) {
    Env env;
    std::mt19937_64 rng(11);
    auto records = random_records(rng, 100000, 2, 400);  // heavy duplication
    sort_records(records, 2);
    auto p = env.path("t.bt");
    BPlusTree::bulk_load(env.fm, env.pool, p, 2, records);
    BPlusTree tree(env.fm, env.pool, p);
    EXPECT_EQ(tree.record_count(), records.size());
    EXPECT_GE(tree.height(), 2u);
    auto scanned = drain(tree.scan_all());
    ASSERT_EQ(scanned.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        ASSERT_EQ(scanned[i][0], records[i][0]) << "row " << i;
        ASSERT_EQ(scanned[i][1], records[i][1]) << "row " << i;
    }
}

TEST(BPlusTree, BulkLoadRejectsUnsortedInput) {
    Env env;
    std::vector<Record> bad = {rec(2, 1), rec(1, 9)};
    EXPECT_THROW(BPlusTree::bulk_load(env.fm, env.pool, env.path("t.bt"), 2, bad),
                 SortOrderError);
    // Equal adjacent records are fine (duplicates), descending second column is not.
    std::vector<Record> dup = {rec(1, 1), rec(1, 1), rec(1, 2)};
    EXPECT_NO_THROW(BPlusTree::bulk_load(env.fm, env.pool, env.path("u.bt"), 2, dup));
    std::vector<Record> bad2 = {rec(1, 2), rec(1, 1)};
    EXPECT_THROW(BPlusTree::bulk_load(env.fm, env.pool, env.path("v.bt"), 2, bad2),
                 SortOrderError);
}

TEST(BPlusTree, BulkLoadIsDeterministic) {
    Env env(512);
    std::mt19937_64 rng(12);
    auto records = random_records(rng, 20000, 3, 50);
    sort_records(records, 3);
    BPlusTree::bulk_load(env.fm, env.pool, env.path("a.bt"), 3, records);
    BPlusTree::bulk_load(env.fm, env.pool, env.path("b.bt"), 3, records);
    env.pool.flush_all();
    env.fm.sync_all();
    auto a = file_bytes(env.path("a.bt"));
    auto b = file_bytes(env.path("b.bt"));
    ASSERT_FALSE(a.empty());
    EXPECT_EQ(a, b);
}

TEST(BPlusTree, IncrementalInsertMatchesBulkLoad) {
    Env env(512, 128);
    std::mt19937_64 rng(13);
    auto records = random_records(rng, 20000, 3, 60);

    auto sorted = records;
    sort_records(sorted, 3);
    BPlusTree::bulk_load(env.fm, env.pool, env.path("bulk.bt"), 3, sorted);
    BPlusTree bulk(env.fm, env.pool, env.path("bulk.bt"));

    BPlusTree::create_empty(env.fm, env.pool, env.path("inc.bt"), 3);
    BPlusTree inc(env.fm, env.pool, env.path("inc.bt"));
    for (const auto& r : records) inc.insert(r);

    EXPECT_EQ(inc.record_count(), bulk.record_count());
    auto a = drain(bulk.scan_all());
    auto b = drain(inc.scan_all());
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        ASSERT_EQ(0, BPlusTree::compare(a[i], b[i], 3)) << "row " << i;
}

TEST(BPlusTree, InsertIntoBulkLoadedTree) {
    Env env(512);
    std::mt19937_64 rng(14);
    auto records = random_records(rng, 12000, 2, 80);
    auto first = std::vector<Record>(records.begin(), records.begin() + 6000);
    sort_records(first, 2);
    auto p = env.path("t.bt");
    BPlusTree::bulk_load(env.fm, env.pool, p, 2, first);
    BPlusTree tree(env.fm, env.pool, p);
    for (std::size_t i = 6000; i < records.size(); ++i) tree.insert(records[i]);

    auto expect = records;
    sort_records(expect, 2);
    auto got = drain(tree.scan_all());
    ASSERT_EQ(got.size(), expect.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        ASSERT_EQ(0, BPlusTree::compare(got[i], expect[i], 2)) << "row " << i;
}

TEST(BPlusTree, LowerBoundMatchesOracle) {
    Env env(512);
    std::mt19937_64 rng(15);
    auto records = random_records(rng, 5000, 2, 300);
    sort_records(records, 2);
    auto p = env.path("t.bt");
    BPlusTree::bulk_load(env.fm, env.pool, p, 2, records);
    BPlusTree tree(env.fm, env.pool, p);

    auto oracle = [&](const Record& target) {
        return std::lower_bound(records.begin(), records.end(), target,
                                [](const Record& a, const Record& b) {
                                    return BPlusTree::compare(a, b, 2) < 0;
                                });
    };
    std::uniform_int_distribution<uint64_t> dist(0, 320);
    for (int i = 0; i < 500; ++i) {
        Record target = rec(dist(rng), dist(rng));
        auto it = tree.lower_bound(target);
        auto ref = oracle(target);
        if (ref == records.end()) {
            EXPECT_FALSE(it.valid());
        } else {
            ASSERT_TRUE(it.valid());
            EXPECT_EQ(0, BPlusTree::compare(it.record(), *ref, 2));
        }
        it.close();
    }
    // Beyond the maximum record.
    EXPECT_FALSE(tree.lower_bound(rec(301, 0)).valid());
}

TEST(BPlusTree, PrefixScanMatchesFilterOracle) {
    Env env(512);
    std::mt19937_64 rng(16);
    auto records = random_records(rng, 8000, 4, 12);  // tiny domain: long prefix runs
    sort_records(records, 4);
    auto p = env.path("t.bt");
    BPlusTree::bulk_load(env.fm, env.pool, p, 4, records);
    BPlusTree tree(env.fm, env.pool, p);

    std::uniform_int_distribution<uint64_t> dist(0, 13);
    std::uniform_int_distribution<uint32_t> len_dist(1, 3);
    for (int i = 0; i < 300; ++i) {
        uint32_t len = len_dist(rng);
        Record prefix = rec(dist(rng), dist(rng), dist(rng));
        std::vector<Record> expect;
        for (const auto& r : records) {
            bool match = true;
            for (uint32_t c = 0; c < len; ++c) match &= r[c] == prefix[c];
            if (match) expect.push_back(r);
        }
        auto got = drain(tree.prefix_scan(prefix, len));
        ASSERT_EQ(got.size(), expect.size()) << "prefix len " << len;
        for (std::size_t j = 0; j < got.size(); ++j)
            ASSERT_EQ(0, BPlusTree::compare(got[j], expect[j], 4));
    }
}

TEST(BPlusTree, SeekAdvancesMonotonically) {
    Env env(512);
    std::mt19937_64 rng(17);
    auto records = random_records(rng, 6000, 2, 500);
    sort_records(records, 2);
    auto p = env.path("t.bt");
    BPlusTree::bulk_load(env.fm, env.pool, p, 2, records);
    BPlusTree tree(env.fm, env.pool, p);

    // Oracle: an index that only moves forward.
    std::size_t idx = 0;
    auto advance_to = [&](const Record& target) {
        while (idx < records.size() && BPlusTree::compare(records[idx], target, 2) < 0) ++idx;
    };

    auto it = tree.scan_all();
    std::uniform_int_distribution<uint64_t> dist(0, 520);
    std::vector<Record> targets;
    for (int i = 0; i < 400; ++i) targets.push_back(rec(dist(rng), dist(rng)));
    sort_records(targets, 2);
    // Shuffle lightly so some targets fall behind the cursor (must be no-ops).
    for (std::size_t i = 0; i + 1 < targets.size(); i += 7) std::swap(targets[i], targets[i + 1]);

    for (const auto& t : targets) {
        if (!it.valid()) break;
        Record before = it.record();
        it.seek(t);
        if (BPlusTree::compare(t, before, 2) <= 0) {
            // Target at or behind the cursor: stays put.
            ASSERT_TRUE(it.valid());
            ASSERT_EQ(0, BPlusTree::compare(it.record(), before, 2));
            continue;
        }
        advance_to(t);
        if (idx == records.size()) {
            ASSERT_FALSE(it.valid());
            break;
        }
        ASSERT_TRUE(it.valid());
        ASSERT_EQ(0, BPlusTree::compare(it.record(), records[idx], 2))
            << "seek target (" << t[0].payload() << "," << t[1].payload() << ")";
    }
}

TEST(BPlusTree, DuplicateRunStaysContiguous) {
    Env env(512);
    auto p = env.path("t.bt");
    BPlusTree::create_empty(env.fm, env.pool, p, 2);
    BPlusTree tree(env.fm, env.pool, p);
    // Interleave a hot duplicate with scattered neighbors.
    for (int i = 0; i < 2000; ++i) {
        tree.insert(rec(50, 50));
        tree.insert(rec(uint64_t(i % 100), uint64_t((i * 7) % 100)));
    }
    auto dup = drain(tree.prefix_scan(rec(50, 50), 2));
    std::size_t expected = 2000;  // the interleaved neighbor lands on (50,50) occasionally
    for (int i = 0; i < 2000; ++i)
        if (i % 100 == 50 && (i * 7) % 100 == 50) ++expected;
    EXPECT_EQ(dup.size(), expected);
    EXPECT_EQ(tree.record_count(), 4000u);
}

TEST(BPlusTree, PersistsAcrossReopen) {
    mdb::testing::TempDir dir;
    std::mt19937_64 rng(18);
    auto records = random_records(rng, 30000, 4, 40);
    sort_records(records, 4);
    uint32_t height = 0;
    {
        FileManager fm(512);
        BufferPool pool(fm, 64);
        BPlusTree::bulk_load(fm, pool, dir / "t.bt", 4, records);
        BPlusTree tree(fm, pool, dir / "t.bt");
        for (int i = 0; i < 500; ++i) tree.insert(rec(41, 1, uint64_t(i), 9));
        height = tree.height();
        pool.flush_all();
        fm.sync_all();
    }
    FileManager fm(512);
    BufferPool pool(fm, 64);
    BPlusTree tree(fm, pool, dir / "t.bt");
    EXPECT_EQ(tree.arity(), 4u);
    EXPECT_EQ(tree.record_count(), records.size() + 500);
    EXPECT_EQ(tree.height(), height);
    auto got = drain(tree.scan_all());
    for (int i = 0; i < 500; ++i) records.push_back(rec(41, 1, uint64_t(i), 9));
    sort_records(records, 4);
    ASSERT_EQ(got.size(), records.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        ASSERT_EQ(0, BPlusTree::compare(got[i], records[i], 4)) << "row " << i;
}

TEST(BPlusTree, OpenRejectsForeignFile) {
    Env env;
    auto p = env.path("junk.bt");
    {
        std::ofstream out(p, std::ios::binary);
        std::string page(4096, '\x5a');
        out.write(page.data(), std::streamsize(page.size()));
    }
    EXPECT_THROW(BPlusTree(env.fm, env.pool, p), CorruptionError);
}

TEST(BPlusTree, IteratorHoldsExactlyOnePin) {
    Env env(512);
    std::mt19937_64 rng(19);
    auto records = random_records(rng, 4000, 2, 100);
    sort_records(records, 2);
    auto p = env.path("t.bt");
    BPlusTree::bulk_load(env.fm, env.pool, p, 2, records);
    BPlusTree tree(env.fm, env.pool, p);
    ASSERT_EQ(env.pool.pinned_count(), 0u);

    auto it = tree.scan_all();
    std::size_t steps = 0;
    while (it.valid()) {
        ASSERT_EQ(env.pool.pinned_count(), 1u);
        if (++steps % 97 == 0) it.seek(rec(it.record()[0].payload() + 3, 0));
        else it.next();
    }
    EXPECT_EQ(env.pool.pinned_count(), 0u);

    // Two live iterators hold two pins; closing drops them one by one.
    auto i1 = tree.scan_all();
    auto i2 = tree.lower_bound(rec(50, 0));
    EXPECT_EQ(env.pool.pinned_count(), 2u);
    i1.close();
    EXPECT_EQ(env.pool.pinned_count(), 1u);
    i2.close();
    EXPECT_EQ(env.pool.pinned_count(), 0u);
}

TEST(BPlusTree, DeepTreeOnTinyPages) {
    Env env(128, 32);  // leaf capacity 15 at arity 1; forces several levels
    std::mt19937_64 rng(20);
    auto records = random_records(rng, 5000, 1, 2000);
    sort_records(records, 1);
    auto p = env.path("t.bt");
    BPlusTree::bulk_load(env.fm, env.pool, p, 1, records);
    BPlusTree tree(env.fm, env.pool, p);
    EXPECT_GE(tree.height(), 3u);
    auto got = drain(tree.scan_all());
    ASSERT_EQ(got.size(), records.size());
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_EQ(got[i][0], records[i][0]);
    for (int i = 0; i < 200; ++i) {
        Record t = rec(std::uniform_int_distribution<uint64_t>(0, 2100)(rng));
        auto it = tree.lower_bound(t);
        auto ref = std::lower_bound(records.begin(), records.end(), t,
                                    [](const Record& a, const Record& b) {
                                        return BPlusTree::compare(a, b, 1) < 0;
                                    });
        if (ref == records.end()) EXPECT_FALSE(it.valid());
        else {
            ASSERT_TRUE(it.valid());
            EXPECT_EQ(it.record()[0], (*ref)[0]);
        }
    }
}

TEST(BPlusTree, DescentCounterTracksRootToLeafWalks) {
    Env env(512);
    std::mt19937_64 rng(21);
    auto records = random_records(rng, 3000, 2, 200);
    sort_records(records, 2);
    auto p = env.path("t.bt");
    BPlusTree::bulk_load(env.fm, env.pool, p, 2, records);
    BPlusTree tree(env.fm, env.pool, p);

    uint64_t before = tree.descents();
    auto it = tree.scan_all();
    EXPECT_EQ(tree.descents(), before + 1);
    for (int i = 0; i < 100 && it.valid(); ++i) it.next();
    EXPECT_EQ(tree.descents(), before + 1);  // next() walks the leaf chain
    it.close();
    tree.lower_bound(rec(100, 0)).close();
    tree.lower_bound(rec(150, 0)).close();
    EXPECT_EQ(tree.descents(), before + 3);
}
