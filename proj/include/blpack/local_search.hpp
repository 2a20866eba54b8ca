#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blpack/core.hpp"
#include "blpack/engine.hpp"

namespace blpack {

enum class Strategy { first_improvement, best_improvement, scheduled };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& s);

// Every ordering that differs from the base on at most k positions, identity
// excluded. Displaced position sets come in ascending lexicographic order; for
// each set, the rearrangements displacing every position in it come in
// lexicographic order of the resulting ordering.
class NeighborStream {
public:
    NeighborStream(Ordering base, std::size_t k);
    std::optional<Ordering> next();

private:
    bool advance_set();
    bool advance_arrangement();
    bool is_derangement() const;

    Ordering base_;
    std::size_t n_, k_;
    std::vector<std::size_t> set_;    // displaced positions (sorted)
    std::vector<ItemId> arr_;         // current arrangement of base_ at set_
    bool started_ = false, done_ = false;
};

std::vector<Ordering> neighbors(const Ordering& ordering, std::size_t k);
std::uint64_t neighbor_count(std::size_t n, std::size_t k);

struct SearchStep {
    Ordering ordering;
    Rational height;
};

struct SearchTrace {
    std::vector<SearchStep> steps;  // initial first
    Strategy strategy = Strategy::first_improvement;
    std::size_t k = 0;
    std::uint64_t evaluations = 0;

    std::size_t step_count() const { return steps.empty() ? 0 : steps.size() - 1; }
    const SearchStep& final_step() const { return steps.back(); }
};

struct ImproveResult {
    std::optional<Ordering> ordering;
    Rational height;
    std::uint64_t evaluated = 0;
};

ImproveResult improve(const Instance& inst, const Ordering& ordering, std::size_t k, Strategy strategy);
std::optional<Ordering> improve_step(const Instance& inst, const Ordering& ordering, std::size_t k, Strategy strategy);
SearchTrace run(const Instance& inst, const Ordering& ordering, std::size_t k, Strategy strategy, std::size_t max_steps);

// Orderings p = 0..2^{k-1}-1 of the exponential-steps instance; the p-th has BL height 2^k - p.
std::vector<Ordering> countdown_schedule(int k);

// Replays a schedule as local-search steps; each step must displace at most k
// positions and strictly lower the height. Then continues with first
// improvement from the last ordering until a local optimum or max_steps total.
SearchTrace run_schedule(const Instance& inst, const std::vector<Ordering>& schedule, std::size_t k, std::size_t max_steps);

}  // namespace blpack
