#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "blpack/core.hpp"

namespace blpack {

struct Position {
    Rational x;
    Rational y;
    friend bool operator==(const Position&, const Position&) = default;
};

// Incremental bottom-left board. Coordinates live on the lattice (1/D)Z when a
// common denominator D keeps every coordinate inside int64; otherwise the board
// falls back to exact rational coordinates. Results are identical either way.
class Board {
public:
    // Rational coordinates.
    explicit Board(Rational width);
    // Lattice coordinates with denominator D; throws InvalidInput if a size or
    // position later handed to the board is not a multiple of 1/D.
    Board(Rational width, std::int64_t denominator);
    Board(const Board&);
    Board& operator=(const Board&);
    Board(Board&&) noexcept;
    Board& operator=(Board&&) noexcept;
    ~Board();

    // Lexicographically minimal (y, x) feasible position for a w x h box.
    Position locate(const Rational& w, const Rational& h) const;
    // locate() followed by insert(); also lets later queries skip positions
    // already proven infeasible for boxes at least this large.
    Position place(const Rational& w, const Rational& h);
    // Record an occupied box without any minimality bookkeeping.
    void insert(const Position& at, const Rational& w, const Rational& h);

    bool on_lattice() const;
    std::size_t size() const;
    Rational height() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Smallest D such that the strip width and every item size are multiples of 1/D,
// if D * (W + sum of heights) fits comfortably in int64.
std::optional<std::int64_t> lattice_denominator(const Instance& inst);
Board make_board(const Instance& inst);

class PackingTrace {
public:
    PackingTrace() = default;
    PackingTrace(InstancePtr inst, Ordering ordering, std::vector<Placement> steps);

    const Instance& instance() const { return *inst_; }
    const InstancePtr& instance_ptr() const { return inst_; }
    const Ordering& ordering() const { return ordering_; }
    const std::vector<Placement>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }

    Packing prefix(std::size_t i) const;  // packing after i placement steps
    Packing final_packing() const { return prefix(steps_.size()); }
    Rational height() const;

private:
    InstancePtr inst_;
    Ordering ordering_;
    std::vector<Placement> steps_;
};

Position bottom_left_position(const Packing& prefix, const Item& item);
PackingTrace pack(const InstancePtr& inst, const Ordering& ordering);
Rational bl_height(const Instance& inst, const Ordering& ordering);

struct SearchResult {
    Ordering ordering;
    Packing packing;
    Rational height;
    std::uint64_t orderings_examined = 0;
};

class InstanceTooLarge : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

inline constexpr std::size_t kExhaustiveCap = 9;

SearchResult best_exhaustive(const InstancePtr& inst, std::size_t cap = kExhaustiveCap);
std::pair<SearchResult, SearchResult> sampled_extremes(const InstancePtr& inst, std::uint64_t samples, std::uint64_t seed);

}  // namespace blpack
