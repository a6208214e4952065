#include "mdb/storage/bplus_tree.hpp"

#include <cassert>
#include <cstring>

namespace mdb {

namespace {

// "MDBTREE1" read as a little-endian u64.
constexpr uint64_t kMagic = 0x314545525442444DULL;
constexpr uint32_t kVersion = 1;
constexpr uint32_t kNodeHeader = 8;

uint16_t load_u16(const std::byte* p) { uint16_t v; std::memcpy(&v, p, 2); return v; }
uint32_t load_u32(const std::byte* p) { uint32_t v; std::memcpy(&v, p, 4); return v; }
uint64_t load_u64(const std::byte* p) { uint64_t v; std::memcpy(&v, p, 8); return v; }
void store_u16(std::byte* p, uint16_t v) { std::memcpy(p, &v, 2); }
void store_u32(std::byte* p, uint32_t v) { std::memcpy(p, &v, 4); }
void store_u64(std::byte* p, uint64_t v) { std::memcpy(p, &v, 8); }

struct Layout {
    uint32_t arity, rec_bytes, leaf_cap, int_cap, page_size;
};

Layout make_layout(uint32_t page_size, uint32_t arity) {
    Layout l;
    l.page_size = page_size;
    l.arity = arity;
    l.rec_bytes = 8 * arity;
    l.leaf_cap = (page_size - kNodeHeader) / l.rec_bytes;
    l.int_cap = (page_size - kNodeHeader - 4) / (l.rec_bytes + 4);
    if (arity == 0 || arity > BPlusTree::kMaxArity)
        throw StorageError("tree arity must be between 1 and 4");
    if (l.leaf_cap < 2 || l.int_cap < 2)
        throw StorageError("page size too small for arity " + std::to_string(arity));
    return l;
}

// Mutable view over one node page.
struct Node {
    std::byte* p;
    const Layout* l;

    bool leaf() const { return p[0] == std::byte{1}; }
    void init(bool is_leaf) {
        std::memset(p, 0, l->page_size);
        p[0] = std::byte{is_leaf ? 1 : 0};
    }
    uint16_t count() const { return load_u16(p + 2); }
    void set_count(uint16_t c) { store_u16(p + 2, c); }
    uint32_t next() const { return load_u32(p + 4); }
    void set_next(uint32_t n) { store_u32(p + 4, n); }

    std::byte* rec_ptr(uint32_t i) const { return p + kNodeHeader + i * l->rec_bytes; }
    BPlusTree::Record rec(uint32_t i) const {
        BPlusTree::Record r{};
        std::memcpy(r.data(), rec_ptr(i), l->rec_bytes);
        return r;
    }
    void set_rec(uint32_t i, const BPlusTree::Record& r) {
        std::memcpy(rec_ptr(i), r.data(), l->rec_bytes);
    }

    std::byte* child_ptr(uint32_t i) const { return p + kNodeHeader + i * 4; }
    uint32_t child(uint32_t i) const { return load_u32(child_ptr(i)); }
    void set_child(uint32_t i, uint32_t c) { store_u32(child_ptr(i), c); }

    std::byte* sep_ptr(uint32_t i) const {
        return p + kNodeHeader + 4 * (l->int_cap + 1) + i * l->rec_bytes;
    }
    BPlusTree::Record sep(uint32_t i) const {
        BPlusTree::Record r{};
        std::memcpy(r.data(), sep_ptr(i), l->rec_bytes);
        return r;
    }
    void set_sep(uint32_t i, const BPlusTree::Record& r) {
        std::memcpy(sep_ptr(i), r.data(), l->rec_bytes);
    }

    // First slot in a leaf at or after `from` whose record is >= target.
    uint32_t lower_bound(const BPlusTree::Record& target, uint32_t from = 0) const {
        uint32_t lo = from, hi = count();
        while (lo < hi) {
            uint32_t mid = (lo + hi) / 2;
            if (BPlusTree::compare(rec(mid), target, l->arity) < 0) lo = mid + 1;
            else hi = mid;
        }
        return lo;
    }
    // First slot in a leaf whose record is > target.
    uint32_t upper_bound(const BPlusTree::Record& target) const {
        uint32_t lo = 0, hi = count();
        while (lo < hi) {
            uint32_t mid = (lo + hi) / 2;
            if (BPlusTree::compare(rec(mid), target, l->arity) <= 0) lo = mid + 1;
            else hi = mid;
        }
        return lo;
    }
    // Child index to descend into. Search routing picks the first child that
    // can hold a record >= target (duplicates may straddle leaves, so equal
    // separators route left); insert routing appends duplicates rightwards.
    uint32_t route(const BPlusTree::Record& target, bool for_insert) const {
        uint32_t lo = 0, hi = count();
        while (lo < hi) {
            uint32_t mid = (lo + hi) / 2;
            int c = BPlusTree::compare(sep(mid), target, l->arity);
            bool descend_right = for_insert ? c <= 0 : c < 0;
            if (descend_right) lo = mid + 1;
            else hi = mid;
        }
        return lo;
    }
};

void write_meta_page(std::byte* p, uint32_t page_size, uint32_t arity, uint32_t root,
                     uint32_t height, uint64_t count) {
    std::memset(p, 0, page_size);
    store_u64(p + 0, kMagic);
    store_u32(p + 8, kVersion);
    store_u32(p + 12, arity);
    store_u32(p + 16, root);
    store_u32(p + 20, height);
    store_u64(p + 24, count);
    store_u32(p + 32, page_size);
}

FileId fresh_file(FileManager& fm, BufferPool& pool, const std::filesystem::path& path) {
    FileId f = fm.open(path, true);
    pool.drop_file(f);
    fm.truncate(f);
    return f;
}

}  // namespace

void BPlusTree::create_empty(FileManager& fm, BufferPool& pool,
                             const std::filesystem::path& path, uint32_t arity) {
    Layout l = make_layout(fm.page_size(), arity);
    FileId file = fresh_file(fm, pool, path);

    uint32_t meta_no = fm.allocate_page(file);
    uint32_t root_no = fm.allocate_page(file);
    {
        PagePin root = pool.pin({file, root_no});
        Node n{root.data(), &l};
        n.init(true);
        root.mark_dirty();
    }
    PagePin meta = pool.pin({file, meta_no});
    write_meta_page(meta.data(), l.page_size, arity, root_no, 0, 0);
    meta.mark_dirty();
}

void BPlusTree::bulk_load(FileManager& fm, BufferPool& pool, const std::filesystem::path& path,
                          uint32_t arity, const std::vector<Record>& sorted) {
    Layout l = make_layout(fm.page_size(), arity);
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (compare(sorted[i - 1], sorted[i], arity) > 0)
            throw SortOrderError("bulk load input out of order at record " + std::to_string(i));

    FileId file = fresh_file(fm, pool, path);
    uint32_t meta_no = fm.allocate_page(file);

    struct Entry {
        Record first;
        uint32_t page;
    };
    std::vector<Entry> level;
    uint32_t height = 0;
    uint32_t root_no;

    if (sorted.empty()) {
        root_no = fm.allocate_page(file);
        PagePin root = pool.pin({file, root_no});
        Node n{root.data(), &l};
        n.init(true);
        root.mark_dirty();
    } else {
        // Leaves, packed full, allocated consecutively so the next-pointer
        // of each is simply the following page.
        std::size_t n_leaves = (sorted.size() + l.leaf_cap - 1) / l.leaf_cap;
        std::size_t at = 0;
        for (std::size_t i = 0; i < n_leaves; ++i) {
            uint32_t page_no = fm.allocate_page(file);
            std::size_t take = std::min<std::size_t>(l.leaf_cap, sorted.size() - at);
            PagePin pin = pool.pin({file, page_no});
            Node n{pin.data(), &l};
            n.init(true);
            n.set_count(uint16_t(take));
            n.set_next(i + 1 < n_leaves ? page_no + 1 : 0);
            for (std::size_t j = 0; j < take; ++j) n.set_rec(uint32_t(j), sorted[at + j]);
            pin.mark_dirty();
            level.push_back({sorted[at], page_no});
            at += take;
        }
        // Internal levels, bottom-up; separator i is the first record of
        // child i+1.
        while (level.size() > 1) {
            std::vector<Entry> up;
            std::size_t i = 0;
            while (i < level.size()) {
                std::size_t take = std::min<std::size_t>(l.int_cap + 1, level.size() - i);
                uint32_t page_no = fm.allocate_page(file);
                PagePin pin = pool.pin({file, page_no});
                Node n{pin.data(), &l};
                n.init(false);
                n.set_count(uint16_t(take - 1));
                for (std::size_t j = 0; j < take; ++j) n.set_child(uint32_t(j), level[i + j].page);
                for (std::size_t j = 1; j < take; ++j)
                    n.set_sep(uint32_t(j - 1), level[i + j].first);
                pin.mark_dirty();
                up.push_back({level[i].first, page_no});
                i += take;
            }
            level = std::move(up);
            ++height;
        }
        root_no = level[0].page;
    }

    PagePin meta = pool.pin({file, meta_no});
    write_meta_page(meta.data(), l.page_size, arity, root_no, height, sorted.size());
    meta.mark_dirty();
}

BPlusTree::BPlusTree(FileManager& fm, BufferPool& pool, const std::filesystem::path& path)
    : fm_(fm), pool_(pool) {
    file_ = fm.open(path, false);
    if (fm.page_count(file_) == 0)
        throw CorruptionError("tree file '" + path.string() + "' is empty");
    PagePin meta = pool.pin({file_, 0});
    const std::byte* p = meta.data();
    if (load_u64(p) != kMagic || load_u32(p + 8) != kVersion)
        throw CorruptionError("tree file '" + path.string() + "' has a bad header");
    if (load_u32(p + 32) != fm.page_size())
        throw CorruptionError("tree file '" + path.string() + "' was written with page size " +
                              std::to_string(load_u32(p + 32)));
    arity_ = load_u32(p + 12);
    root_ = load_u32(p + 16);
    height_ = load_u32(p + 20);
    record_count_ = load_u64(p + 24);
    Layout l = make_layout(fm.page_size(), arity_);
    leaf_cap_ = l.leaf_cap;
    int_cap_ = l.int_cap;
}

PagePin BPlusTree::pin(uint32_t page_no) { return pool_.pin({file_, page_no}); }

PagePin BPlusTree::descend(const Record& target, bool for_insert,
                           std::vector<std::pair<uint32_t, uint32_t>>* path) {
    ++descents_;
    Layout l{arity_, 8 * arity_, leaf_cap_, int_cap_, fm_.page_size()};
    uint32_t page_no = root_;
    PagePin cur = pin(page_no);
    for (uint32_t level = 0; level < height_; ++level) {
        Node n{cur.data(), &l};
        assert(!n.leaf());
        uint32_t idx = n.route(target, for_insert);
        if (path) path->emplace_back(page_no, idx);
        uint32_t child = n.child(idx);
        cur.release();  // keep at most one page pinned during the descent
        cur = pin(child);
        page_no = child;
    }
    return cur;
}

void BPlusTree::write_meta() {
    PagePin meta = pin(0);
    write_meta_page(meta.data(), fm_.page_size(), arity_, root_, height_, record_count_);
    meta.mark_dirty();
}

void BPlusTree::bump_count(int64_t delta) {
    record_count_ = uint64_t(int64_t(record_count_) + delta);
    write_meta();
}

void BPlusTree::insert(const Record& r) {
    Layout l{arity_, 8 * arity_, leaf_cap_, int_cap_, fm_.page_size()};
    std::vector<std::pair<uint32_t, uint32_t>> path;
    PagePin leaf = descend(r, true, &path);
    Node n{leaf.data(), &l};
    uint16_t cnt = n.count();
    uint32_t pos = n.upper_bound(r);  // duplicates append to the right
    if (cnt < leaf_cap_) {
        std::memmove(n.rec_ptr(pos + 1), n.rec_ptr(pos), (cnt - pos) * l.rec_bytes);
        n.set_rec(pos, r);
        n.set_count(cnt + 1);
        leaf.mark_dirty();
    } else {
        split_leaf(leaf, r, pos, path);
    }
    bump_count(+1);
}

void BPlusTree::split_leaf(PagePin& leaf, const Record& r, uint32_t pos,
                           std::vector<std::pair<uint32_t, uint32_t>>& path) {
    Layout l{arity_, 8 * arity_, leaf_cap_, int_cap_, fm_.page_size()};
    Node left{leaf.data(), &l};
    uint16_t cnt = left.count();

    std::vector<Record> all;
    all.reserve(cnt + 1);
    for (uint32_t i = 0; i < pos; ++i) all.push_back(left.rec(i));
    all.push_back(r);
    for (uint32_t i = pos; i < cnt; ++i) all.push_back(left.rec(i));

    uint32_t mid = uint32_t(all.size()) / 2;
    uint32_t right_no = fm_.allocate_page(file_);
    {
        PagePin right_pin = pin(right_no);
        Node right{right_pin.data(), &l};
        right.init(true);
        right.set_count(uint16_t(all.size() - mid));
        right.set_next(left.next());
        for (uint32_t i = mid; i < all.size(); ++i) right.set_rec(i - mid, all[i]);
        right_pin.mark_dirty();
    }
    left.init(true);
    left.set_count(uint16_t(mid));
    left.set_next(right_no);
    for (uint32_t i = 0; i < mid; ++i) left.set_rec(i, all[i]);
    leaf.mark_dirty();
    leaf.release();

    insert_into_parent(path, all[mid], right_no);
}

void BPlusTree::insert_into_parent(std::vector<std::pair<uint32_t, uint32_t>>& path,
                                   const Record& sep_in, uint32_t right_in) {
    Layout l{arity_, 8 * arity_, leaf_cap_, int_cap_, fm_.page_size()};
    Record sep = sep_in;
    uint32_t right_page = right_in;

    while (true) {
        if (path.empty()) {
            // The old root split: grow the tree by one level.
            uint32_t new_root = fm_.allocate_page(file_);
            PagePin pin_root = pin(new_root);
            Node n{pin_root.data(), &l};
            n.init(false);
            n.set_count(1);
            n.set_child(0, root_);
            n.set_child(1, right_page);
            n.set_sep(0, sep);
            pin_root.mark_dirty();
            root_ = new_root;
            ++height_;
            write_meta();
            return;
        }

        auto [page_no, child_idx] = path.back();
        path.pop_back();
        PagePin ppin = pin(page_no);
        Node n{ppin.data(), &l};
        uint16_t cnt = n.count();

        if (cnt < int_cap_) {
            std::memmove(n.child_ptr(child_idx + 2), n.child_ptr(child_idx + 1),
                         (cnt - child_idx) * 4);
            n.set_child(child_idx + 1, right_page);
            std::memmove(n.sep_ptr(child_idx + 1), n.sep_ptr(child_idx),
                         (cnt - child_idx) * l.rec_bytes);
            n.set_sep(child_idx, sep);
            n.set_count(cnt + 1);
            ppin.mark_dirty();
            return;
        }

        // Full internal node: rebuild both halves and promote the middle
        // separator one level up.
        std::vector<Record> seps;
        std::vector<uint32_t> kids;
        for (uint32_t i = 0; i < cnt; ++i) seps.push_back(n.sep(i));
        for (uint32_t i = 0; i <= cnt; ++i) kids.push_back(n.child(i));
        seps.insert(seps.begin() + child_idx, sep);
        kids.insert(kids.begin() + child_idx + 1, right_page);

        uint32_t m = uint32_t(seps.size()) / 2;
        Record promoted = seps[m];

        uint32_t new_no = fm_.allocate_page(file_);
        {
            PagePin npin = pin(new_no);
            Node right{npin.data(), &l};
            right.init(false);
            right.set_count(uint16_t(seps.size() - m - 1));
            for (uint32_t i = m + 1; i < seps.size(); ++i) right.set_sep(i - m - 1, seps[i]);
            for (uint32_t i = m + 1; i < kids.size(); ++i) right.set_child(i - m - 1, kids[i]);
            npin.mark_dirty();
        }
        n.init(false);
        n.set_count(uint16_t(m));
        for (uint32_t i = 0; i < m; ++i) n.set_sep(i, seps[i]);
        for (uint32_t i = 0; i <= m; ++i) n.set_child(i, kids[i]);
        ppin.mark_dirty();

        sep = promoted;
        right_page = new_no;
    }
}

// ---- iterator -------------------------------------------------------------

void BPlusTree::Iterator::settle() {
    Layout l{tree_->arity_, 8 * tree_->arity_, tree_->leaf_cap_, tree_->int_cap_,
             tree_->fm_.page_size()};
    while (true) {
        Node n{page_.data(), &l};
        if (slot_ < n.count()) {
            current_ = n.rec(slot_);
            if (bounded_ && compare(current_, upper_, l.arity) > 0) {
                close();
                return;
            }
            return;
        }
        uint32_t nxt = n.next();
        if (nxt == 0) {
            close();
            return;
        }
        page_.release();  // one pinned leaf at a time
        page_ = tree_->pin(nxt);
        slot_ = 0;
    }
}

void BPlusTree::Iterator::next() {
    if (!valid()) return;
    ++slot_;
    settle();
}

void BPlusTree::Iterator::seek(const Record& target) {
    if (!valid()) return;
    uint32_t arity = tree_->arity_;
    if (compare(current_, target, arity) >= 0) return;
    Layout l{arity, 8 * arity, tree_->leaf_cap_, tree_->int_cap_, tree_->fm_.page_size()};
    Node n{page_.data(), &l};
    if (compare(n.rec(n.count() - 1), target, arity) >= 0) {
        slot_ = n.lower_bound(target, slot_ + 1);
    } else {
        BPlusTree* t = tree_;
        page_.release();
        page_ = t->descend(target, false, nullptr);
        Node leaf{page_.data(), &l};
        slot_ = leaf.lower_bound(target);
    }
    settle();
}

void BPlusTree::Iterator::close() {
    page_.release();
    tree_ = nullptr;
}

BPlusTree::Iterator BPlusTree::lower_bound(const Record& target) {
    Iterator it;
    it.tree_ = this;
    it.page_ = descend(target, false, nullptr);
    Layout l{arity_, 8 * arity_, leaf_cap_, int_cap_, fm_.page_size()};
    Node leaf{it.page_.data(), &l};
    it.slot_ = leaf.lower_bound(target);
    it.settle();
    return it;
}

BPlusTree::Iterator BPlusTree::scan_all() { return lower_bound(Record{}); }

BPlusTree::Iterator BPlusTree::prefix_scan(const Record& prefix, uint32_t prefix_len) {
    Record lower = prefix, upper = prefix;
    for (uint32_t i = prefix_len; i < arity_; ++i) {
        lower[i] = ObjectId(0);
        upper[i] = ObjectId(~uint64_t{0});
    }
    Iterator it = lower_bound(lower);
    if (it.valid()) {
        it.bounded_ = true;
        it.upper_ = upper;
        if (compare(it.current_, upper, arity_) > 0) it.close();
    }
    return it;
}

}  // namespace mdb
