#include "mdb/storage/database.hpp"

#include <algorithm>

namespace mdb {

namespace {

struct TreeSpec {
    const char* file;
    uint32_t arity;
};

constexpr std::array<TreeSpec, kTreeCount> kTrees{{
    {"objects.bt", 1},
    {"dg_stye.bt", 4},
    {"dg_tyse.bt", 4},
    {"dg_yste.bt", 4},
    {"dg_ytse.bt", 4},
    {"labels_ol.bt", 2},
    {"labels_lo.bt", 2},
    {"props_opv.bt", 3},
    {"props_pvo.bt", 3},
}};

constexpr const char* kCatalogFile = "catalog.json";
constexpr const char* kObjectFile = "objects.of";
constexpr const char* kEdgeFile = "edges.et";

}  // namespace

std::unique_ptr<Database> Database::create(const std::filesystem::path& dir,
                                           const DatabaseOptions& opts) {
    std::filesystem::create_directories(dir);
    if (std::filesystem::exists(dir / kCatalogFile))
        throw StorageError("'" + dir.string() + "' already contains a database");

    auto db = std::unique_ptr<Database>(new Database());
    db->dir_ = dir;
    db->page_size_ = opts.page_size;
    db->fm_ = std::make_unique<FileManager>(opts.page_size);
    db->pool_ = std::make_unique<BufferPool>(*db->fm_, opts.buffer_pages);
    db->names_ = std::make_unique<ObjectFile>(dir / kObjectFile, true);
    db->edges_ = std::make_unique<EdgeTable>(dir / kEdgeFile, true);
    for (std::size_t i = 0; i < kTreeCount; ++i) {
        BPlusTree::create_empty(*db->fm_, *db->pool_, dir / kTrees[i].file, kTrees[i].arity);
        db->trees_[i] = std::make_unique<BPlusTree>(*db->fm_, *db->pool_, dir / kTrees[i].file);
    }
    db->catalog_.save(dir / kCatalogFile, opts.page_size);
    return db;
}

std::unique_ptr<Database> Database::open(const std::filesystem::path& dir,
                                         const DatabaseOptions& opts) {
    if (!std::filesystem::exists(dir / kCatalogFile))
        throw StorageError("'" + dir.string() + "' is not a database directory");

    uint32_t stored_page_size = 0;
    Catalog catalog = Catalog::load(dir / kCatalogFile, stored_page_size);
    auto db = std::unique_ptr<Database>(new Database());
    db->dir_ = dir;
    db->catalog_ = std::move(catalog);
    db->page_size_ = stored_page_size;
    db->fm_ = std::make_unique<FileManager>(stored_page_size);
    db->pool_ = std::make_unique<BufferPool>(*db->fm_, opts.buffer_pages);
    db->names_ = std::make_unique<ObjectFile>(dir / kObjectFile, false);
    db->edges_ = std::make_unique<EdgeTable>(dir / kEdgeFile, false);
    for (std::size_t i = 0; i < kTreeCount; ++i)
        db->trees_[i] = std::make_unique<BPlusTree>(*db->fm_, *db->pool_, dir / kTrees[i].file);
    return db;
}

void Database::store_graph(const ReferenceGraph& g) {
    if (edges_->count() != 0 || tree(TreeId::Objects).record_count() != 0)
        throw StorageError("store_graph requires an empty database");

    using Record = BPlusTree::Record;
    auto sort4 = [](std::vector<Record>& v) {
        std::sort(v.begin(), v.end(), [](const Record& a, const Record& b) {
            return BPlusTree::compare(a, b, 4) < 0;
        });
    };

    for (const EdgeRecord& e : g.edges()) edges_->append(e.source, e.type, e.target);

    std::vector<Record> objects;
    objects.reserve(g.objects().size());
    for (ObjectId o : g.objects()) objects.push_back({o});  // set iterates in sorted order

    std::vector<Record> stye, tyse, yste, ytse;
    for (const EdgeRecord& e : g.edges()) {
        stye.push_back({e.source, e.target, e.type, e.eid});
        tyse.push_back({e.target, e.type, e.source, e.eid});
        yste.push_back({e.type, e.source, e.target, e.eid});
        ytse.push_back({e.type, e.target, e.source, e.eid});
    }
    sort4(stye); sort4(tyse); sort4(yste); sort4(ytse);

    std::vector<Record> lab_ol, lab_lo;
    for (const auto& [object, label] : g.labels()) {
        lab_ol.push_back({object, label});  // set order == record order for (o, l)
        lab_lo.push_back({label, object});
    }
    std::sort(lab_lo.begin(), lab_lo.end(), [](const Record& a, const Record& b) {
        return BPlusTree::compare(a, b, 2) < 0;
    });

    std::vector<Record> prop_opv, prop_pvo;
    for (const auto& [ok, value] : g.props()) {
        prop_opv.push_back({ok.first, ok.second, value});  // map order == record order
        prop_pvo.push_back({ok.second, value, ok.first});
    }
    std::sort(prop_pvo.begin(), prop_pvo.end(), [](const Record& a, const Record& b) {
        return BPlusTree::compare(a, b, 3) < 0;
    });

    const std::vector<Record>* contents[kTreeCount] = {
        &objects, &stye, &tyse, &yste, &ytse, &lab_ol, &lab_lo, &prop_opv, &prop_pvo};
    for (std::size_t i = 0; i < kTreeCount; ++i) {
        BPlusTree::bulk_load(*fm_, *pool_, dir_ / kTrees[i].file, kTrees[i].arity, *contents[i]);
        trees_[i] = std::make_unique<BPlusTree>(*fm_, *pool_, dir_ / kTrees[i].file);
    }

    catalog_ = Catalog::compute(g);
    catalog_.save(dir_ / kCatalogFile, page_size_);
    flush();
}

std::optional<ObjectId> Database::find_named(std::string_view name) const {
    if (auto off = names_->lookup(name)) return ObjectId::named_node(*off);
    return std::nullopt;
}

std::optional<ObjectId> Database::find_string(std::string_view s) const {
    return encode_string_readonly(s, *names_);
}

uint64_t Database::total_descents() const {
    uint64_t n = 0;
    for (const auto& t : trees_) n += t->descents();
    return n;
}

void Database::flush() {
    pool_->flush_all();
    fm_->sync_all();
}

ReferenceGraph mirror_database(Database& db) {
    ReferenceGraph g;
    for (uint64_t i = 0; i < db.edges().count(); ++i) {
        EdgeRecord e = db.edge_lookup(ObjectId::edge(i));
        g.add_edge(e.source, e.type, e.target);
    }
    for (auto it = db.tree(TreeId::LabelsOL).scan_all(); it.valid(); it.next())
        g.add_label(it.record()[0], it.record()[1]);
    for (auto it = db.tree(TreeId::PropsOPV).scan_all(); it.valid(); it.next())
        g.set_prop(it.record()[0], it.record()[1], it.record()[2]);
    // Objects with no edges or annotations exist only in the object index.
    for (auto it = db.tree(TreeId::Objects).scan_all(); it.valid(); it.next())
        g.add_object(it.record()[0]);
    return g;
}

}  // namespace mdb
