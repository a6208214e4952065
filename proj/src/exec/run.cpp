#include "mdb/exec/run.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>

#include "mdb/core/errors.hpp"

namespace mdb::exec {

std::optional<ObjectId> element_value(const algebra::Mapping& mu,
                                      const query::SelectionElement& e, Database& db) {
    auto it = mu.find(e.var);
    if (it == mu.end()) return std::nullopt;
    if (!e.key) return it->second;
    return db_prop(db, it->second, *e.key);
}

namespace {

struct Item {
    algebra::Row row;
    std::vector<std::optional<ObjectId>> keys;
};

// Fixed-width binary encoding of an item: one 64-bit word per value, raw id
// or 0 for null (no stored value or witness ever has raw 0).
void write_item(std::ofstream& out, const Item& item) {
    auto put = [&out](const std::optional<ObjectId>& v) {
        uint64_t word = v ? v->raw : 0;
        out.write(reinterpret_cast<const char*>(&word), sizeof word);
    };
    for (const auto& v : item.row.values) put(v);
    for (const auto& v : item.keys) put(v);
}

bool read_item(std::ifstream& in, std::size_t n_values, std::size_t n_keys, Item& item) {
    auto get = [&in](std::optional<ObjectId>& v) {
        uint64_t word = 0;
        in.read(reinterpret_cast<char*>(&word), sizeof word);
        if (word == 0) {
            v.reset();
        } else {
            ObjectId id;
            id.raw = word;
            v = id;
        }
    };
    item.row.values.assign(n_values, std::nullopt);
    item.keys.assign(n_keys, std::nullopt);
    for (auto& v : item.row.values) get(v);
    for (auto& v : item.keys) get(v);
    return bool(in);
}

std::filesystem::path fresh_run_path() {
    static std::atomic<uint64_t> counter{0};
    auto n = counter.fetch_add(1);
    auto name = "mdb_sort_" + std::to_string(uint64_t(::getpid())) + "_" + std::to_string(n) +
                ".run";
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

// Materialized, ordered output: either a fully in-memory sorted vector or a
// set of sorted run files merged on demand. Runs are consecutive chunks of
// the input, and the merge prefers the earlier run on ties, so the whole
// sequence is stable.
struct ResultStream::SortedOutput {
    ExecContext* ctx;
    const ModifierSpec* spec;

    std::vector<Item> items;  // in-memory tail (sorted)
    std::size_t pos = 0;

    struct Run {
        std::filesystem::path path;
        std::ifstream in;
        Item head;
        bool alive = false;
    };
    std::vector<Run> runs;

    ~SortedOutput() {
        for (auto& r : runs) {
            r.in.close();
            std::error_code ec;
            std::filesystem::remove(r.path, ec);
        }
    }

    // Comparison used for ordering: the order keys (descending ones
    // reversed), then every projected column in canonical value order.
    int compare(const Item& a, const Item& b) const {
        const auto& dict = ctx->db->names();
        for (std::size_t i = 0; i < spec->order.size(); ++i) {
            int c = algebra::solution_value_compare(a.keys[i], b.keys[i], ctx->witnesses, dict);
            if (spec->order[i].descending) c = -c;
            if (c != 0) return c;
        }
        for (std::size_t i = 0; i < a.row.values.size(); ++i) {
            int c = algebra::solution_value_compare(a.row.values[i], b.row.values[i],
                                                    ctx->witnesses, dict);
            if (c != 0) return c;
        }
        return 0;
    }

    void sort_chunk() {
        std::stable_sort(items.begin(), items.end(),
                         [this](const Item& a, const Item& b) { return compare(a, b) < 0; });
    }

    void flush_chunk() {
        sort_chunk();
        Run r;
        r.path = fresh_run_path();
        {
            std::ofstream out(r.path, std::ios::binary | std::ios::trunc);
            if (!out) throw StorageError("cannot create sort run file " + r.path.string());
            for (const auto& item : items) write_item(out, item);
        }
        runs.push_back(std::move(r));
        items.clear();
    }

    void start() {
        if (runs.empty()) {
            sort_chunk();
            return;
        }
        if (!items.empty()) flush_chunk();
        for (auto& r : runs) {
            r.in.open(r.path, std::ios::binary);
            if (!r.in) throw StorageError("cannot reopen sort run file " + r.path.string());
            r.alive = read_item(r.in, spec->select.size(), spec->order.size(), r.head);
        }
    }

    std::optional<algebra::Row> next() {
        if (runs.empty()) {
            if (pos >= items.size()) return std::nullopt;
            return std::move(items[pos++].row);
        }
        std::size_t best = runs.size();
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (!runs[i].alive) continue;
            if (best == runs.size() || compare(runs[i].head, runs[best].head) < 0) best = i;
        }
        if (best == runs.size()) return std::nullopt;
        algebra::Row row = std::move(runs[best].head.row);
        runs[best].alive =
            read_item(runs[best].in, spec->select.size(), spec->order.size(), runs[best].head);
        return row;
    }
};

ResultStream::ResultStream(ExecContext& ctx, Operator& root, ModifierSpec spec)
    : ctx_(&ctx), root_(&root), spec_(std::move(spec)) {
    root_->open({});
    streaming_ = spec_.order.empty();
    if (!streaming_) materialize_sorted();
}

ResultStream::~ResultStream() = default;

algebra::Row ResultStream::project(const algebra::Mapping& mu) const {
    algebra::Row row;
    row.values.reserve(spec_.select.size());
    for (const auto& e : spec_.select) row.values.push_back(element_value(mu, e, *ctx_->db));
    return row;
}

void ResultStream::materialize_sorted() {
    sorted_ = std::make_unique<SortedOutput>();
    sorted_->ctx = ctx_;
    sorted_->spec = &spec_;
    while (auto mu = root_->next()) {
        Item item;
        item.row = project(*mu);
        for (const auto& k : spec_.order) {
            item.keys.push_back(element_value(*mu, k.element, *ctx_->db));
        }
        sorted_->items.push_back(std::move(item));
        if (sorted_->items.size() >= ctx_->sort_spill_rows) sorted_->flush_chunk();
    }
    sorted_->start();
}

std::optional<algebra::Row> ResultStream::next() {
    if (spec_.limit > 0 && served_ >= spec_.limit) return std::nullopt;
    std::optional<algebra::Row> row;
    if (streaming_) {
        if (auto mu = root_->next()) row = project(*mu);
    } else {
        row = sorted_->next();
    }
    if (row) ++served_;
    return row;
}

}  // namespace mdb::exec
