#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>

#include "blpack/engine.hpp"
#include "blpack/io.hpp"
#include "blpack/kernels.hpp"

using namespace blpack;

namespace {

bool fits(const Packing& prefix, const Rational& x, const Rational& y, const Item& it) {
    if (x.sign() < 0 || y.sign() < 0 || x + it.w > prefix.instance().width()) return false;
    Faces f{x, x + it.w, y, y + it.h};
    for (std::size_t k = 0; k < prefix.size(); ++k)
        if (interiors_overlap(f, prefix.faces(k))) return false;
    return true;
}

// lexicographically smallest (y, x) over the corner grid
Position brute_position(const Packing& prefix, const Item& it) {
    std::vector<Rational> ys{0}, xs{0};
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        ys.push_back(prefix.faces(k).tf);
        xs.push_back(prefix.faces(k).rf);
    }
    std::sort(ys.begin(), ys.end());
    std::sort(xs.begin(), xs.end());
    for (const Rational& y : ys)
        for (const Rational& x : xs)
            if (fits(prefix, x, y, it)) return {x, y};
    return {Rational(-1), Rational(-1)};
}

}  // namespace

TEST_CASE("placement matches the brute-force corner oracle") {
    for (const RandomCase& c : random_corpus(150, 5)) {
        PackingTrace t = pack(c.instance, c.ordering);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Item& it = c.instance->item(t.steps()[i].id);
            Position want = brute_position(t.prefix(i), it);
            CHECK(t.steps()[i].x == want.x);
            CHECK(t.steps()[i].y == want.y);
        }
    }
}

TEST_CASE("no sampled feasible position beats the chosen one") {
    std::mt19937_64 rng(3);
    for (const RandomCase& c : random_corpus(40, 9)) {
        PackingTrace t = pack(c.instance, c.ordering);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Packing pre = t.prefix(i);
            const Item& it = c.instance->item(t.steps()[i].id);
            const Placement& at = t.steps()[i];
            for (int s = 0; s < 200; ++s) {
                Rational y = at.y * Rational(static_cast<std::int64_t>(rng() % 1001), 1000);
                Rational x = (c.instance->width() - it.w) * Rational(static_cast<std::int64_t>(rng() % 1001), 1000);
                if (y > at.y || (y == at.y && x >= at.x)) continue;
                CHECK_FALSE(fits(pre, x, y, it));
            }
        }
    }
}

TEST_CASE("lattice and rational boards agree") {
    for (const RandomCase& c : random_corpus(60, 21)) {
        REQUIRE(lattice_denominator(*c.instance));
        Board lat = make_board(*c.instance);
        Board rat(c.instance->width());
        CHECK(lat.on_lattice());
        CHECK_FALSE(rat.on_lattice());
        for (ItemId id : c.ordering.ids()) {
            const Item& it = c.instance->item(id);
            CHECK(lat.place(it.w, it.h) == rat.place(it.w, it.h));
        }
        CHECK(lat.height() == rat.height());
    }
}

TEST_CASE("gap kernels agree with the scalar reference") {
    std::mt19937_64 rng(17);
    using kernels::BoxSoA;
    for (int it = 0; it < 3000; ++it) {
        const std::size_t n = rng() % 40;
        const std::int64_t width = 50 + static_cast<std::int64_t>(rng() % 200);
        std::vector<std::array<std::int64_t, 4>> boxes;
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t l = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(width));
            std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 30);
            std::int64_t b = static_cast<std::int64_t>(rng() % 100);
            boxes.push_back({l, std::min(width, l + w), b, b + 1 + static_cast<std::int64_t>(rng() % 30)});
        }
        std::sort(boxes.begin(), boxes.end());
        std::vector<std::int64_t> lf, rf, bf, tf;
        for (auto& b : boxes) {
            lf.push_back(b[0]);
            rf.push_back(b[1]);
            bf.push_back(b[2]);
            tf.push_back(b[3]);
        }
        BoxSoA soa{lf.data(), rf.data(), bf.data(), tf.data(), n};
        const std::int64_t lo = static_cast<std::int64_t>(rng() % 100), hi = lo + 1 + static_cast<std::int64_t>(rng() % 20);
        const std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 40);
        const std::int64_t ref = kernels::leftmost_gap_scalar(soa, lo, hi, w, width);
        CHECK(kernels::leftmost_gap()(soa, lo, hi, w, width) == ref);
#if defined(__x86_64__) || defined(__i386__)
        if (kernels::avx2_available()) CHECK(kernels::leftmost_gap_avx2(soa, lo, hi, w, width) == ref);
#endif
    }
}

TEST_CASE("exhaustive search examines n! orderings and rejects large instances") {
    auto inst = std::make_shared<const Instance>(Instance::from_squares(5, {3, 2, 2, 1}));
    SearchResult r = best_exhaustive(inst);
    CHECK(r.orderings_examined == 24);
    CHECK(r.height == bl_height(*inst, r.ordering));
    std::vector<Rational> ten(10, Rational(1));
    auto big = std::make_shared<const Instance>(Instance::from_squares(4, ten));
    CHECK_THROWS_AS(best_exhaustive(big), InstanceTooLarge);
}

TEST_CASE("sampled extremes are deterministic and bracket the samples") {
    auto inst = std::make_shared<const Instance>(Instance::from_squares(7, {3, 3, 2, 2, 2, 2, 1}));
    auto [lo1, hi1] = sampled_extremes(inst, 300, 4);
    auto [lo2, hi2] = sampled_extremes(inst, 300, 4);
    CHECK(lo1.ordering == lo2.ordering);
    CHECK(hi1.ordering == hi2.ordering);
    CHECK(lo1.height <= hi1.height);
    CHECK(lo1.height >= best_exhaustive(inst).height);
}

TEST_CASE("instances and orderings reject bad input") {
    CHECK_THROWS_AS(Instance::from_squares(2, {3}), InvalidInput);
    CHECK_THROWS_AS(Instance::from_squares(2, {Rational(0)}), InvalidInput);
    CHECK_THROWS_AS(Ordering({0, 0, 1}), InvalidInput);
    auto inst = Instance::from_sizes(4, {{2, 1}, {3, 2}, {1, 1}});
    CHECK(Ordering::by_decreasing_width(inst).ids() == std::vector<ItemId>{1, 0, 2});
    CHECK(support_size(Ordering({0, 1, 2}), Ordering({2, 1, 0})) == 2);
}

TEST_CASE("feasibility catches overlaps and strip violations") {
    auto inst = std::make_shared<const Instance>(Instance::from_squares(4, {2, 2}));
    CHECK(feasible(Packing(inst, {{0, 0, 0}, {1, 2, 0}})).ok);
    CHECK_FALSE(feasible(Packing(inst, {{0, 0, 0}, {1, 1, 1}})).ok);
    CHECK_FALSE(feasible(Packing(inst, {{0, 0, 0}, {1, 3, 0}})).ok);
    CHECK(area_lower_bound(*inst) == 2);
}
