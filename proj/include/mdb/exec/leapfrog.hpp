#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdb/exec/operator.hpp"

namespace mdb::exec {

// Multiway join that intersects all atoms one variable at a time, in a fixed
// global variable order. Each atom is served by one stored permutation whose
// variable columns appear in that order; the join seeks the tree iterators
// from the smallest current key to the largest until all atoms agree on a
// value, binds the variable, and descends to the next one.
//
// Constructed with atoms in tree-column term order plus the variable order.
// Construction throws PermutationUnavailableError when an atom's variable
// columns cannot follow the order (or a variable repeats within an atom).
// For every outer mapping the join is restarted with the outer bindings
// pinned as constants.
class LeapfrogJoin : public Operator {
public:
    LeapfrogJoin(ExecContext& ctx, OperatorPtr outer, std::vector<ScanSpec> atoms,
                 std::vector<std::string> var_order);
    void open(const algebra::Mapping& parent) override;
    std::optional<algebra::Mapping> next() override;
    void reset() override;

private:
    // Forward-only trie view over one permutation's range iterator. `pins`
    // holds the values fixed for the leading columns; every movement is a
    // monotone seek of the underlying iterator.
    struct Cursor {
        BPlusTree* tree = nullptr;
        std::optional<BPlusTree::Iterator> it;
        BPlusTree::Record pins{};
        uint32_t depth = 0;

        bool seek_at(uint32_t col, ObjectId target);
        bool first_at(uint32_t col);
        bool next_at(uint32_t col);
        ObjectId key(uint32_t col) const;
        void push(ObjectId v);
        void pop(uint32_t to_depth);
    };

    // One atom column as seen by the join: either fixed (constant at plan
    // time or bound by the outer mapping) or the position of a join variable.
    struct ColPlan {
        bool fixed = false;
        ObjectId value;     // when fixed
        std::size_t level;  // when not fixed: index into levels_
    };

    struct Participant {
        std::size_t atom;
        uint32_t col;
        uint32_t depth_before;  // cursor depth recorded when the level opens
    };

    struct Level {
        std::string var;
        std::vector<Participant> parts;
        ObjectId key;  // agreed value when aligned
    };

    bool prepare(const algebra::Mapping& parent);  // classify columns, check fully fixed atoms
    bool advance_cursor_to(std::size_t atom, uint32_t col);  // pin fixed columns up to col
    bool enter(std::size_t level);
    bool align(std::size_t level);
    bool advance(std::size_t level);
    void leave(std::size_t level);
    std::optional<algebra::Mapping> run();  // resume the search loop

    ExecContext* ctx_;
    OperatorPtr outer_;
    std::vector<ScanSpec> atoms_;
    std::vector<std::string> order_;

    std::optional<algebra::Mapping> current_;  // outer mapping driving the join
    std::vector<Cursor> cursors_;
    std::vector<std::vector<ColPlan>> cols_;
    std::vector<Level> levels_;
    bool started_ = false;   // search loop entered for the current outer row
    bool exhausted_ = true;  // no more solutions for the current outer row
};

}  // namespace mdb::exec
