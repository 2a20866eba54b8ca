#include <doctest.h>

#include <algorithm>
#include <set>

#include "blpack/generators.hpp"
#include "blpack/io.hpp"
#include "blpack/local_search.hpp"

using namespace blpack;

namespace {

// every permutation within support k, identity excluded, by brute force
std::set<std::vector<ItemId>> brute_neighbors(const Ordering& base, std::size_t k) {
    std::set<std::vector<ItemId>> out;
    std::vector<ItemId> v = base.ids();
    std::sort(v.begin(), v.end());
    do {
        Ordering o(v);
        const std::size_t s = support_size(base, o);
        if (s >= 1 && s <= k) out.insert(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

}  // namespace

TEST_CASE("neighborhood equals brute force and is sorted within each position set") {
    const Ordering base({3, 0, 4, 1, 5, 2});
    for (std::size_t k = 0; k <= 6; ++k) {
        std::vector<Ordering> got = neighbors(base, k);
        std::set<std::vector<ItemId>> seen;
        for (const Ordering& o : got) seen.insert(o.ids());
        CHECK(seen.size() == got.size());
        CHECK(seen == brute_neighbors(base, k));
        CHECK(got.size() == neighbor_count(6, k));
    }
}

TEST_CASE("neighbor count closed form") {
    CHECK(neighbor_count(5, 1) == 0);
    CHECK(neighbor_count(5, 2) == 10);
    // C(5,2) + 2 C(5,3)
    CHECK(neighbor_count(5, 3) == 30);
    // all 5! - 1 permutations
    CHECK(neighbor_count(5, 5) == 119);
    CHECK(neighbor_count(21, 3) == 210 + 2 * 1330);
}

TEST_CASE("neighbor order within a displaced set is lexicographic") {
    std::vector<Ordering> got = neighbors(Ordering({0, 1, 2, 3}), 3);
    // first set {0,1}, then {0,1,2} with its two derangements in order
    REQUIRE(got.size() >= 3);
    CHECK(got[0].ids() == std::vector<ItemId>{1, 0, 2, 3});
    CHECK(got[1].ids() == std::vector<ItemId>{1, 2, 0, 3});
    CHECK(got[2].ids() == std::vector<ItemId>{2, 0, 1, 3});
}

TEST_CASE("improvement strategies") {
    // first corpus case that admits an improving 2-neighbor
    InstancePtr inst;
    Ordering start;
    for (const RandomCase& c : random_corpus(200, 2)) {
        if (improve(*c.instance, c.ordering, 2, Strategy::first_improvement).ordering) {
            inst = c.instance;
            start = c.ordering;
            break;
        }
    }
    REQUIRE(inst);
    ImproveResult first = improve(*inst, start, 2, Strategy::first_improvement);
    ImproveResult best = improve(*inst, start, 2, Strategy::best_improvement);
    REQUIRE(first.ordering);
    REQUIRE(best.ordering);
    CHECK(first.height < bl_height(*inst, start));
    CHECK(best.height <= first.height);
    Rational floor = best.height;
    for (const Ordering& o : neighbors(start, 2)) CHECK(bl_height(*inst, o) >= floor);
    SearchTrace t = run(*inst, start, 2, Strategy::first_improvement, 100);
    for (std::size_t i = 1; i < t.steps.size(); ++i) {
        CHECK(t.steps[i].height < t.steps[i - 1].height);
        CHECK(support_size(t.steps[i - 1].ordering, t.steps[i].ordering) <= 2);
    }
    CHECK_FALSE(improve_step(*inst, t.final_step().ordering, 2, Strategy::first_improvement));
    CHECK_THROWS_AS(run(*inst, start, 2, Strategy::scheduled, 10), InvalidInput);
}

TEST_CASE("adversarial local-search ordering is a local optimum at twice the optimum") {
    for (int k = 1; k <= 2; ++k) {
        GeneratedCase c = gen_local_search(k);
        const Ordering& adv = c.orderings.at("adversarial");
        CHECK(bl_height(*c.instance, adv) == 2 * (k + 2));
        CHECK_FALSE(improve_step(*c.instance, adv, static_cast<std::size_t>(k), Strategy::best_improvement));
    }
}

TEST_CASE("countdown schedule") {
    for (int k = 1; k <= 6; ++k) {
        GeneratedCase c = gen_exponential_steps(k);
        std::vector<Ordering> s = countdown_schedule(k);
        REQUIRE(s.size() == (std::size_t{1} << (k - 1)));
        for (std::size_t p = 0; p < s.size(); ++p) {
            CHECK(bl_height(*c.instance, s[p]) == pow2(k) - static_cast<std::int64_t>(p));
            if (p) CHECK(support_size(s[p - 1], s[p]) <= static_cast<std::size_t>(k));
        }
    }
    GeneratedCase c = gen_exponential_steps(4);
    SearchTrace t = run_schedule(*c.instance, countdown_schedule(4), 4, 1000);
    CHECK(t.step_count() >= 7);
    CHECK(t.steps[7].height == 9);
    CHECK_THROWS_AS(countdown_schedule(0), InvalidInput);
}

TEST_CASE("strategy names") {
    CHECK(parse_strategy("best") == Strategy::best_improvement);
    CHECK(parse_strategy("first-improvement") == Strategy::first_improvement);
    CHECK(parse_strategy(to_string(Strategy::scheduled)) == Strategy::scheduled);
    CHECK_THROWS_AS(parse_strategy("greedy"), InvalidInput);
}
