#include "blpack/local_search.hpp"

#include <algorithm>
#include <stdexcept>

#include "blpack/parallel.hpp"

namespace blpack {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::first_improvement: return "first";
        case Strategy::best_improvement: return "best";
        case Strategy::scheduled: return "schedule";
    }
    return "?";
}

Strategy parse_strategy(const std::string& s) {
    if (s == "first" || s == "first-improvement") return Strategy::first_improvement;
    if (s == "best" || s == "best-improvement") return Strategy::best_improvement;
    if (s == "schedule" || s == "scheduled") return Strategy::scheduled;
    throw InvalidInput("unknown strategy '" + s + "' (expected first, best or schedule)");
}

NeighborStream::NeighborStream(Ordering base, std::size_t k) : base_(std::move(base)), n_(base_.size()), k_(k) {
    if (k_ > n_) k_ = n_;
}

bool NeighborStream::advance_set() {
    if (set_.empty()) {
        if (n_ == 0) return false;
        set_.push_back(0);
        return true;
    }
    if (set_.size() < k_ && set_.back() + 1 < n_) {
        set_.push_back(set_.back() + 1);
        return true;
    }
    while (!set_.empty()) {
        if (set_.back() + 1 < n_) {
            ++set_.back();
            return true;
        }
        set_.pop_back();
    }
    return false;
}

bool NeighborStream::is_derangement() const {
    for (std::size_t j = 0; j < arr_.size(); ++j)
        if (arr_[j] == base_[set_[j]]) return false;
    return true;
}

bool NeighborStream::advance_arrangement() {
    while (std::next_permutation(arr_.begin(), arr_.end())) {
        bool deranged = true;
        for (std::size_t j = 0; j < arr_.size() && deranged; ++j) deranged = arr_[j] != base_[set_[j]];
        if (deranged) return true;
    }
    return false;
}

std::optional<Ordering> NeighborStream::next() {
    if (done_) return std::nullopt;
    for (;;) {
        if (!started_ || !advance_arrangement()) {
            started_ = true;
            bool found = false;
            while (advance_set()) {
                if (set_.size() < 2) continue;
                arr_.clear();
                for (std::size_t p : set_) arr_.push_back(base_[p]);
                std::sort(arr_.begin(), arr_.end());
                if (is_derangement() || advance_arrangement()) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                done_ = true;
                return std::nullopt;
            }
        }
        std::vector<ItemId> v = base_.ids();
        for (std::size_t j = 0; j < set_.size(); ++j) v[set_[j]] = arr_[j];
        return Ordering(std::move(v));
    }
}

std::vector<Ordering> neighbors(const Ordering& ordering, std::size_t k) {
    std::vector<Ordering> out;
    NeighborStream s(ordering, k);
    while (auto o = s.next()) out.push_back(std::move(*o));
    return out;
}

std::uint64_t neighbor_count(std::size_t n, std::size_t k) {
    // sum over s=2..k of C(n,s) * derangements(s)
    std::uint64_t total = 0, binom = 1, der_prev2 = 1, der_prev1 = 0;  // D0 = 1, D1 = 0
    for (std::size_t s = 1; s <= std::min(n, k); ++s) {
        binom = binom * (n - s + 1) / s;
        std::uint64_t der = s == 1 ? 0 : (s - 1) * (der_prev1 + der_prev2);
        if (s >= 2) {
            der_prev2 = der_prev1;
            der_prev1 = der;
        }
        total += binom * der;
    }
    return total;
}

ImproveResult improve(const Instance& inst, const Ordering& ordering, std::size_t k, Strategy strategy) {
    ImproveResult res;
    const Rational current = bl_height(inst, ordering);
    res.height = current;
    NeighborStream stream(ordering, k);
    constexpr std::size_t kBatch = 512;
    std::optional<Ordering> best;
    Rational best_h = current;
    for (;;) {
        std::vector<Ordering> batch;
        while (batch.size() < kBatch) {
            auto o = stream.next();
            if (!o) break;
            batch.push_back(std::move(*o));
        }
        if (batch.empty()) break;
        std::vector<Rational> hs(batch.size());
        parallel_for(batch.size(), [&](std::size_t i) { hs[i] = bl_height(inst, batch[i]); }, 16);
        res.evaluated += batch.size();
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (strategy == Strategy::first_improvement) {
                if (hs[i] < current) {
                    res.ordering = batch[i];
                    res.height = hs[i];
                    res.evaluated -= batch.size() - i - 1;
                    return res;
                }
            } else if (hs[i] < best_h || (best && hs[i] == best_h && batch[i] < *best)) {
                best = batch[i];
                best_h = hs[i];
            }
        }
    }
    if (best) {
        res.ordering = best;
        res.height = best_h;
    }
    return res;
}

std::optional<Ordering> improve_step(const Instance& inst, const Ordering& ordering, std::size_t k, Strategy strategy) {
    return improve(inst, ordering, k, strategy).ordering;
}

SearchTrace run(const Instance& inst, const Ordering& ordering, std::size_t k, Strategy strategy, std::size_t max_steps) {
    if (strategy == Strategy::scheduled) throw InvalidInput("run: use run_schedule for a scheduled search");
    SearchTrace t;
    t.strategy = strategy;
    t.k = k;
    t.steps.push_back({ordering, bl_height(inst, ordering)});
    t.evaluations = 1;
    while (t.step_count() < max_steps) {
        ImproveResult r = improve(inst, t.steps.back().ordering, k, strategy);
        t.evaluations += r.evaluated + 1;
        if (!r.ordering) break;
        t.steps.push_back({*r.ordering, r.height});
    }
    return t;
}

std::vector<Ordering> countdown_schedule(int k) {
    if (k < 1 || k > 30) throw InvalidInput("countdown schedule: k must lie in [1, 30]");
    std::vector<Ordering> out;
    const std::uint64_t top = std::uint64_t{1} << k;
    for (std::uint64_t p = 0; p < (top >> 1); ++p) {
        const std::uint64_t value = top - p - 1;
        std::vector<int> verticals;
        std::vector<bool> used(k, false);
        for (int j = 0; j < k; ++j) {
            if (!((value >> j) & 1)) continue;
            verticals.push_back(j);
            used[j] = true;
            for (int l = j - 1; l >= 0; --l) {
                if (!used[l]) {
                    verticals.push_back(l);
                    used[l] = true;
                }
            }
        }
        std::vector<ItemId> ord;
        for (int t = 0; t < k; ++t) {
            ord.push_back(static_cast<ItemId>(2 * verticals[t]));
            ord.push_back(static_cast<ItemId>(2 * t + 1));
        }
        out.emplace_back(std::move(ord));
    }
    return out;
}

SearchTrace run_schedule(const Instance& inst, const std::vector<Ordering>& schedule, std::size_t k, std::size_t max_steps) {
    if (schedule.empty()) throw InvalidInput("empty schedule");
    SearchTrace t;
    t.strategy = Strategy::scheduled;
    t.k = k;
    t.steps.push_back({schedule.front(), bl_height(inst, schedule.front())});
    t.evaluations = 1;
    for (std::size_t i = 1; i < schedule.size() && t.step_count() < max_steps; ++i) {
        const SearchStep& prev = t.steps.back();
        if (support_size(prev.ordering, schedule[i]) > k)
            throw InvalidInput("schedule step " + std::to_string(i) + " displaces more than k positions");
        Rational h = bl_height(inst, schedule[i]);
        ++t.evaluations;
        if (!(h < prev.height)) throw InvalidInput("schedule step " + std::to_string(i) + " does not lower the height");
        t.steps.push_back({schedule[i], h});
    }
    while (t.step_count() < max_steps) {
        ImproveResult r = improve(inst, t.steps.back().ordering, k, Strategy::first_improvement);
        t.evaluations += r.evaluated + 1;
        if (!r.ordering) break;
        t.steps.push_back({*r.ordering, r.height});
    }
    return t;
}

}  // namespace blpack
