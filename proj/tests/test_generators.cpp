#include <doctest.h>

#include "blpack/generators.hpp"

using namespace blpack;

TEST_CASE("construction sizes") {
    GeneratedCase cb = generate("checkerboard", {{"m", "4"}});
    CHECK(cb.instance->size() == 86);
    CHECK(cb.instance->width() == Rational(127, 4));
    GeneratedCase ls = generate("localsearch", {{"k", "3"}});
    CHECK(ls.instance->size() == 21);
    CHECK(ls.instance->width() == 60);
    CHECK(generate("rect43", {{"eps", "1/100"}}).instance->size() == 7);
    CHECK(generate("square65", {}).instance->size() == 7);
    // 1 square, 4h smalls, 2h bigs
    CHECK(gen_square_43(3, Rational(1, 20)).instance->size() == 19);
    CHECK(gen_exponential_steps(5).instance->size() == 10);
}

TEST_CASE("every reference packing is feasible and complete at its stated height") {
    std::vector<GeneratedCase> cases = {gen_rect_43(Rational(1, 100)), gen_rect_43_integer(3), gen_square_65(Rational(1, 50)),
                                        gen_square_43(2, Rational(1, 10)), gen_checkerboard(4), gen_local_search(2)};
    for (const GeneratedCase& c : cases) {
        for (const auto& [name, p] : c.reference_packings) {
            INFO(c.construction << " " << name);
            CHECK(feasible(p).ok);
            CHECK(p.complete());
            auto it = c.expected.find(name + "_height");
            if (it != c.expected.end()) CHECK(p.height() == it->second);
        }
    }
}

TEST_CASE("stated bottom-left heights of named orderings") {
    std::vector<GeneratedCase> cases = {gen_rect_43(Rational(1, 100)), gen_square_65(Rational(1, 100)), gen_square_43(2, Rational(1, 10)),
                                        gen_checkerboard(2),            gen_checkerboard(4),             gen_checkerboard_reset(4),
                                        gen_local_search(1),            gen_local_search(3),             gen_exponential_steps(4)};
    for (const GeneratedCase& c : cases) {
        for (const auto& [name, o] : c.orderings) {
            auto it = c.expected.find("bl_height_" + name);
            if (it == c.expected.end()) continue;
            INFO(c.construction << " " << name);
            CHECK(bl_height(*c.instance, o) == it->second);
        }
    }
}

TEST_CASE("checkerboard closed form") {
    // m + 2 - eps with eps = 2 / (m^3 (m^2 + 1))
    CHECK(checkerboard_eps(4) == Rational(1, 544));
    GeneratedCase c = gen_checkerboard(4);
    CHECK(bl_height(*c.instance, c.orderings.at("decreasing")) == Rational(3263, 544));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(generate("checkerboard", {{"m", "3"}}), InvalidInput);
    CHECK_THROWS_AS(generate("rect43", {{"eps", "1/2"}}), InvalidInput);
    CHECK_THROWS_AS(generate("nope", {}), InvalidInput);
    CHECK_THROWS_AS(generate("square43", {{"h", "x"}}), InvalidInput);
    CHECK_THROWS_AS(gen_ten_thirds(1), InvalidInput);
}

TEST_CASE("ten-thirds small case meets its height bound") {
    GeneratedCase c = gen_ten_thirds(2);
    CHECK(ten_thirds_m(2) == 4);
    CHECK(bl_height(*c.instance, c.orderings.at("adversarial")) >= c.expected.at("bl_height_lower_bound"));
}
