#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "mdb/storage/buffer_pool.hpp"
#include "support/temp_dir.hpp"

using namespace mdb;
using mdb::testing::TempDir;

namespace {

constexpr uint32_t kPage = 256;

// A file of n pages where page i is filled with the byte i & 0xff.
FileId make_patterned_file(FileManager& fm, const std::filesystem::path& p, uint32_t n) {
    FileId f = fm.open(p, true);
    std::vector<std::byte> buf(kPage);
    for (uint32_t i = 0; i < n; ++i) {
        fm.allocate_page(f);
        std::memset(buf.data(), int(i & 0xff), kPage);
        fm.write_page({f, i}, buf.data());
    }
    return f;
}

}  // namespace

TEST(BufferPool, SecondChanceEvictsColdPageFirst) {
    TempDir dir;
    FileManager fm(kPage);
    FileId f = make_patterned_file(fm, dir / "data", 4);
    BufferPool pool(fm, 2);

    // Touch A, B, then A again: A is warm (re-hit), B is cold (only loaded).
    pool.pin({f, 0});
    pool.pin({f, 1});
    pool.pin({f, 0});
    EXPECT_EQ(pool.stats().page_reads, 2u);
    EXPECT_EQ(pool.stats().hits, 1u);

    // Loading C must evict B, not A.
    pool.pin({f, 2});
    EXPECT_EQ(pool.stats().evictions, 1u);
    pool.pin({f, 0});  // still resident -> hit
    EXPECT_EQ(pool.stats().page_reads, 3u);
    pool.pin({f, 1});  // was evicted -> miss
    EXPECT_EQ(pool.stats().page_reads, 4u);
}

TEST(BufferPool, PinnedPagesAreNeverEvicted) {
    TempDir dir;
    FileManager fm(kPage);
    FileId f = make_patterned_file(fm, dir / "data", 4);
    BufferPool pool(fm, 2);

    PagePin held = pool.pin({f, 0});
    pool.pin({f, 1});
    pool.pin({f, 2});  // must evict page 1, the only unpinned frame
    pool.pin({f, 3});  // must evict page 2
    EXPECT_EQ(held.data()[0], std::byte{0});  // the held buffer was untouched
    pool.pin({f, 0});
    EXPECT_EQ(pool.stats().page_reads, 4u);  // page 0 never reloaded
}

TEST(BufferPool, ExhaustionRaisesWhenEveryFrameIsPinned) {
    TempDir dir;
    FileManager fm(kPage);
    FileId f = make_patterned_file(fm, dir / "data", 4);
    BufferPool pool(fm, 2);

    PagePin a = pool.pin({f, 0});
    PagePin b = pool.pin({f, 1});
    EXPECT_THROW(pool.pin({f, 2}), PoolExhaustedError);
    b.release();
    EXPECT_NO_THROW(pool.pin({f, 2}));  // one frame free again
}

TEST(BufferPool, DirtyPagesSurviveEviction) {
    TempDir dir;
    FileManager fm(kPage);
    FileId f = make_patterned_file(fm, dir / "data", 8);
    BufferPool pool(fm, 2);

    {
        PagePin p = pool.pin({f, 5});
        p.data()[0] = std::byte{0xAB};
        p.mark_dirty();
    }
    // Push page 5 out through other loads.
    pool.pin({f, 0});
    pool.pin({f, 1});
    pool.pin({f, 2});
    PagePin again = pool.pin({f, 5});
    EXPECT_EQ(again.data()[0], std::byte{0xAB});
}

TEST(BufferPool, RandomWorkloadKeepsResidencyWithinCapacity) {
    TempDir dir;
    FileManager fm(kPage);
    constexpr uint32_t kPages = 200;
    constexpr std::size_t kCapacity = 16;
    FileId f = make_patterned_file(fm, dir / "data", kPages);
    BufferPool pool(fm, kCapacity);

    std::vector<uint8_t> shadow(kPages, 0);  // expected first byte per page
    for (uint32_t i = 0; i < kPages; ++i) shadow[i] = uint8_t(i & 0xff);

    std::mt19937_64 rng(123);
    std::uniform_int_distribution<uint32_t> page(0, kPages - 1);
    std::uniform_int_distribution<int> op(0, 3);
    for (int i = 0; i < 100000; ++i) {
        uint32_t no = page(rng);
        PagePin p = pool.pin({f, no});
        ASSERT_EQ(uint8_t(p.data()[0]), shadow[no]) << "page " << no << " corrupted";
        if (op(rng) == 0) {
            shadow[no] = uint8_t(shadow[no] + 1);
            p.data()[0] = std::byte{shadow[no]};
            p.mark_dirty();
        }
        p.release();
        ASSERT_LE(pool.resident_count(), kCapacity);
        ASSERT_EQ(pool.pinned_count(), 0u);
    }

    // Every page, resident or flushed, must match the shadow model.
    pool.flush_all();
    std::vector<std::byte> buf(kPage);
    for (uint32_t i = 0; i < kPages; ++i) {
        fm.read_page({f, i}, buf.data());
        EXPECT_EQ(uint8_t(buf[0]), shadow[i]) << "page " << i;
    }
}
