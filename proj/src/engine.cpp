#include "blpack/engine.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "blpack/kernels.hpp"
#include "blpack/parallel.hpp"

namespace blpack {
namespace {

template <class C>
class Core {
public:
    explicit Core(C width) : width_(std::move(width)) { ys_.insert(C(0)); }

    std::pair<C, C> locate(const C& w, const C& h) const {
        C start(0);
        for (const Rec& r : recs_)
            if (r.w <= w && r.h <= h && start < r.y) start = r.y;
        for (auto it = ys_.lower_bound(start); it != ys_.end(); ++it) {
            const C& y = *it;
            std::optional<C> x = gap(y, y + h, w);
            if (x) return {*x, y};
        }
        throw std::logic_error("bottom-left: no feasible position above the top face");
    }

    void insert(const C& x, const C& y, const C& w, const C& h) {
        auto pos = std::upper_bound(lf_.begin(), lf_.end(), x) - lf_.begin();
        lf_.insert(lf_.begin() + pos, x);
        rf_.insert(rf_.begin() + pos, x + w);
        bf_.insert(bf_.begin() + pos, y);
        tf_.insert(tf_.begin() + pos, y + h);
        ys_.insert(y + h);
        if (top_ < y + h) top_ = y + h;
    }

    // Every position lexicographically below a BL placement of (w, h) was infeasible
    // for (w, h) and stays infeasible for any box containing it once more boxes arrive.
    void remember(const C& w, const C& h, const C& y) {
        for (Rec& r : recs_) {
            if (r.w == w && r.h == h) {
                if (r.y < y) r.y = y;
                return;
            }
        }
        recs_.push_back({w, h, y});
    }

    std::size_t size() const { return lf_.size(); }
    const C& top() const { return top_; }

private:
    struct Rec {
        C w, h, y;
    };

    std::optional<C> gap(const C& lo, const C& hi, const C& w) const {
        if constexpr (std::is_same_v<C, std::int64_t>) {
            kernels::BoxSoA soa{lf_.data(), rf_.data(), bf_.data(), tf_.data(), lf_.size()};
            std::int64_t x = kernels::leftmost_gap()(soa, lo, hi, w, width_);
            if (x == kernels::kNoGap) return std::nullopt;
            return x;
        } else {
            C cur(0);
            for (std::size_t i = 0; i < lf_.size(); ++i) {
                if (bf_[i] < hi && tf_[i] > lo) {
                    if (lf_[i] - cur >= w) return cur;
                    if (cur < rf_[i]) cur = rf_[i];
                }
            }
            if (width_ - cur >= w) return cur;
            return std::nullopt;
        }
    }

    C width_;
    C top_{0};
    std::vector<C> lf_, rf_, bf_, tf_;
    std::set<C> ys_;
    std::vector<Rec> recs_;
};

__int128 checked_lcm(__int128 a, __int128 b) {
    __int128 x = a, y = b;
    while (y != 0) {
        __int128 t = x % y;
        x = y;
        y = t;
    }
    return a / x * b;
}

constexpr __int128 kLatticeLimit = static_cast<__int128>(1) << 61;

}  // namespace

struct Board::Impl {
    Rational width;
    std::optional<std::int64_t> den;
    std::optional<Core<std::int64_t>> lat;
    std::optional<Core<Rational>> rat;

    std::int64_t scale(const Rational& q) const {
        if (!q.is_small()) throw InvalidInput("coordinate " + q.str() + " is off the lattice");
        std::int64_t d = *den;
        if (d % q.small_den() != 0) throw InvalidInput("coordinate " + q.str() + " is off the lattice 1/" + std::to_string(d));
        __int128 v = static_cast<__int128>(q.small_num()) * (d / q.small_den());
        if (v > kLatticeLimit || v < -kLatticeLimit) throw InvalidInput("coordinate " + q.str() + " overflows the lattice");
        return static_cast<std::int64_t>(v);
    }
    Rational unscale(std::int64_t v) const { return Rational(v, *den); }
};

Board::Board(Rational width) : impl_(std::make_unique<Impl>()) {
    impl_->width = width;
    impl_->rat.emplace(std::move(width));
}

Board::Board(Rational width, std::int64_t denominator) : impl_(std::make_unique<Impl>()) {
    if (denominator <= 0) throw InvalidInput("lattice denominator must be positive");
    impl_->width = width;
    impl_->den = denominator;
    impl_->lat.emplace(impl_->scale(width));
}

Board::Board(const Board& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
Board& Board::operator=(const Board& o) {
    impl_ = std::make_unique<Impl>(*o.impl_);
    return *this;
}
Board::Board(Board&&) noexcept = default;
Board& Board::operator=(Board&&) noexcept = default;
Board::~Board() = default;

Position Board::locate(const Rational& w, const Rational& h) const {
    if (impl_->lat) {
        auto [x, y] = impl_->lat->locate(impl_->scale(w), impl_->scale(h));
        return {impl_->unscale(x), impl_->unscale(y)};
    }
    auto [x, y] = impl_->rat->locate(w, h);
    return {x, y};
}

Position Board::place(const Rational& w, const Rational& h) {
    if (impl_->lat) {
        std::int64_t sw = impl_->scale(w), sh = impl_->scale(h);
        auto [x, y] = impl_->lat->locate(sw, sh);
        impl_->lat->insert(x, y, sw, sh);
        impl_->lat->remember(sw, sh, y);
        return {impl_->unscale(x), impl_->unscale(y)};
    }
    auto [x, y] = impl_->rat->locate(w, h);
    impl_->rat->insert(x, y, w, h);
    impl_->rat->remember(w, h, y);
    return {x, y};
}

void Board::insert(const Position& at, const Rational& w, const Rational& h) {
    if (impl_->lat)
        impl_->lat->insert(impl_->scale(at.x), impl_->scale(at.y), impl_->scale(w), impl_->scale(h));
    else
        impl_->rat->insert(at.x, at.y, w, h);
}

bool Board::on_lattice() const { return impl_->lat.has_value(); }
std::size_t Board::size() const { return impl_->lat ? impl_->lat->size() : impl_->rat->size(); }
Rational Board::height() const { return impl_->lat ? impl_->unscale(impl_->lat->top()) : impl_->rat->top(); }

std::optional<std::int64_t> lattice_denominator(const Instance& inst) {
    auto fold = [](__int128 d, const Rational& q) -> std::optional<__int128> {
        if (!q.is_small()) return std::nullopt;
        __int128 r = checked_lcm(d, q.small_den());
        if (r > kLatticeLimit) return std::nullopt;
        return r;
    };
    std::optional<__int128> d = fold(1, inst.width());
    Rational span = inst.width();
    for (const Item& it : inst.items()) {
        if (d) d = fold(*d, it.w);
        if (d) d = fold(*d, it.h);
        span += it.h;
    }
    if (!d) return std::nullopt;
    if (!span.is_small()) return std::nullopt;
    __int128 reach = static_cast<__int128>(span.small_num()) / span.small_den() + 1;
    if (reach * *d > kLatticeLimit) return std::nullopt;
    return static_cast<std::int64_t>(*d);
}

Board make_board(const Instance& inst) {
    if (auto d = lattice_denominator(inst)) return Board(inst.width(), *d);
    return Board(inst.width());
}

PackingTrace::PackingTrace(InstancePtr inst, Ordering ordering, std::vector<Placement> steps)
    : inst_(std::move(inst)), ordering_(std::move(ordering)), steps_(std::move(steps)) {}

Packing PackingTrace::prefix(std::size_t i) const {
    if (i > steps_.size()) throw std::out_of_range("trace prefix beyond its length");
    return Packing(inst_, std::vector<Placement>(steps_.begin(), steps_.begin() + static_cast<std::ptrdiff_t>(i)));
}

Rational PackingTrace::height() const {
    Rational h = 0;
    for (const Placement& p : steps_) h = max(h, p.y + inst_->item(p.id).h);
    return h;
}

Position bottom_left_position(const Packing& prefix, const Item& item) {
    const Instance& inst = prefix.instance();
    auto fits = [](const Rational& q, std::int64_t d) { return q.is_small() && d % q.small_den() == 0; };
    std::optional<std::int64_t> d = lattice_denominator(inst);
    if (d) {
        for (const Placement& p : prefix.placements())
            if (!fits(p.x, *d) || !fits(p.y, *d)) d.reset();
        if (d && (!fits(item.w, *d) || !fits(item.h, *d))) d.reset();
    }
    Board board = d ? Board(inst.width(), *d) : Board(inst.width());
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        const Placement& p = prefix.placements()[k];
        const Item& it = inst.item(p.id);
        board.insert({p.x, p.y}, it.w, it.h);
    }
    return board.locate(item.w, item.h);
}

PackingTrace pack(const InstancePtr& inst, const Ordering& ordering) {
    if (ordering.size() != inst->size()) throw InvalidInput("ordering length does not match the instance");
    Board board = make_board(*inst);
    std::vector<Placement> steps;
    steps.reserve(ordering.size());
    for (ItemId id : ordering.ids()) {
        const Item& it = inst->item(id);
        Position p = board.place(it.w, it.h);
        steps.push_back({id, std::move(p.x), std::move(p.y)});
    }
    return PackingTrace(inst, ordering, std::move(steps));
}

Rational bl_height(const Instance& inst, const Ordering& ordering) {
    Board board = make_board(inst);
    for (ItemId id : ordering.ids()) board.place(inst.item(id).w, inst.item(id).h);
    return board.height();
}

namespace {

struct Candidate {
    Rational height;
    Ordering ordering;
    bool valid = false;
};

// Smaller height wins; ties go to the lexicographically smaller ordering.
bool better_min(const Candidate& a, const Candidate& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.height != b.height) return a.height < b.height;
    return a.ordering < b.ordering;
}

bool better_max(const Candidate& a, const Candidate& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.height != b.height) return a.height > b.height;
    return a.ordering < b.ordering;
}

SearchResult finish(const InstancePtr& inst, const Candidate& c, std::uint64_t examined) {
    PackingTrace t = pack(inst, c.ordering);
    return {c.ordering, t.final_packing(), t.height(), examined};
}

}  // namespace

SearchResult best_exhaustive(const InstancePtr& inst, std::size_t cap) {
    const std::size_t n = inst->size();
    if (n > cap) throw InstanceTooLarge("exhaustive search limited to " + std::to_string(cap) + " items, instance has " + std::to_string(n));
    if (n == 0) return {Ordering(), Packing(inst, {}), Rational(0), 1};
    // one task per leading item; each enumerates its block in lexicographic order
    std::vector<Candidate> best(n);
    std::vector<std::uint64_t> counts(n, 0);
    parallel_for(
        n,
        [&](std::size_t first) {
            std::vector<ItemId> rest;
            for (std::size_t i = 0; i < n; ++i)
                if (i != first) rest.push_back(static_cast<ItemId>(i));
            std::vector<ItemId> perm(n);
            do {
                perm[0] = static_cast<ItemId>(first);
                std::copy(rest.begin(), rest.end(), perm.begin() + 1);
                Ordering ord(perm);
                Candidate c{bl_height(*inst, ord), ord, true};
                if (better_min(c, best[first])) best[first] = std::move(c);
                ++counts[first];
            } while (std::next_permutation(rest.begin(), rest.end()));
        },
        1);
    Candidate winner;
    std::uint64_t examined = 0;
    for (std::size_t i = 0; i < n; ++i) {
        examined += counts[i];
        if (better_min(best[i], winner)) winner = best[i];
    }
    return finish(inst, winner, examined);
}

std::pair<SearchResult, SearchResult> sampled_extremes(const InstancePtr& inst, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw InvalidInput("at least one sample is required");
    const std::size_t n = inst->size();
    std::mt19937_64 rng(seed);
    std::vector<Ordering> orders;
    orders.reserve(samples);
    std::vector<ItemId> base(n);
    std::iota(base.begin(), base.end(), 0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::vector<ItemId> v = base;
        seeded_shuffle(v, rng);
        orders.emplace_back(std::move(v));
    }
    std::vector<Rational> heights(samples);
    parallel_for(samples, [&](std::size_t i) { heights[i] = bl_height(*inst, orders[i]); }, 256);
    Candidate lo, hi;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Candidate c{heights[i], orders[i], true};
        if (better_min(c, lo)) lo = c;
        if (better_max(c, hi)) hi = c;
    }
    return {finish(inst, lo, samples), finish(inst, hi, samples)};
}

}  // namespace blpack
