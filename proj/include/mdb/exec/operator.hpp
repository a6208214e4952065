#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdb/algebra/eval.hpp"
#include "mdb/algebra/solution.hpp"
#include "mdb/query/query.hpp"
#include "mdb/storage/database.hpp"

namespace mdb::exec {

// Shared state for one query execution: the database, the table of path
// witnesses produced so far, and the instrumentation counters.
struct ExecContext {
    Database* db = nullptr;
    algebra::WitnessTable witnesses;

    // Number of bindings produced by all pattern operators (every mapping
    // emitted by a scan, join, or path extension).
    uint64_t intermediate_bindings = 0;

    // Rows a sort keeps in memory before spilling runs to temporary files.
    uint64_t sort_spill_rows = 1'000'000;

    explicit ExecContext(Database& d) : db(&d) {}
};

// Looks up the value of (object, key name) in the stored property relation.
std::optional<ObjectId> db_prop(Database& db, ObjectId object, const std::string& key);

// Condition evaluation backed by the stored property relation.
bool eval_condition_db(const algebra::Mapping& mu, const query::Condition& c, Database& db);

// Pull-based binding iterator. open() installs a parent mapping; every
// mapping later produced by next() extends that parent. reset() rewinds to
// the state right after the last open(), so the same sequence replays.
class Operator {
public:
    virtual ~Operator() = default;
    virtual void open(const algebra::Mapping& parent) = 0;
    virtual std::optional<algebra::Mapping> next() = 0;
    virtual void reset() = 0;
};

using OperatorPtr = std::unique_ptr<Operator>;

// Emits its parent mapping exactly once, extended with fixed assignments
// (variables replaced by constants during simplification stay visible
// through these). A parent binding that contradicts an assignment — or two
// assignments to one variable with different values — yields nothing.
class Seed : public Operator {
public:
    explicit Seed(std::vector<std::pair<std::string, ObjectId>> assignments);
    void open(const algebra::Mapping& parent) override;
    std::optional<algebra::Mapping> next() override;
    void reset() override;

private:
    std::vector<std::pair<std::string, ObjectId>> assignments_;
    std::optional<algebra::Mapping> row_;
    bool done_ = false;
};

// One relational atom bound to a stored permutation: the terms are listed in
// the order of the tree's columns.
struct ScanSpec {
    TreeId tree = TreeId::Objects;
    std::vector<query::Term> cols;
};

// Index nested-loop step: for every outer mapping, scans the widest prefix of
// the permutation fixed by constants and bound variables, checks the
// remaining columns, and emits the outer mapping extended with the new
// bindings.
class IndexNestedLoop : public Operator {
public:
    IndexNestedLoop(ExecContext& ctx, OperatorPtr outer, ScanSpec spec);
    void open(const algebra::Mapping& parent) override;
    std::optional<algebra::Mapping> next() override;
    void reset() override;

private:
    bool start_scan(const algebra::Mapping& outer);

    ExecContext* ctx_;
    OperatorPtr outer_;
    ScanSpec spec_;
    std::optional<algebra::Mapping> current_;
    std::optional<BPlusTree::Iterator> it_;
};

// Keeps the mappings that satisfy the condition (properties probed from the
// stored relations).
class Filter : public Operator {
public:
    Filter(ExecContext& ctx, OperatorPtr child, const query::Condition* condition);
    void open(const algebra::Mapping& parent) override;
    std::optional<algebra::Mapping> next() override;
    void reset() override;

private:
    ExecContext* ctx_;
    OperatorPtr child_;
    const query::Condition* condition_;
};

// Left outer join: the optional side is re-evaluated under each left mapping;
// a left mapping with no extensions passes through unextended.
class OptionalJoin : public Operator {
public:
    OptionalJoin(ExecContext& ctx, OperatorPtr left, OperatorPtr right);
    void open(const algebra::Mapping& parent) override;
    std::optional<algebra::Mapping> next() override;
    void reset() override;

private:
    ExecContext* ctx_;
    OperatorPtr left_;
    OperatorPtr right_;
    std::optional<algebra::Mapping> left_row_;
    bool right_open_ = false;
    bool matched_ = false;
};

}  // namespace mdb::exec
