#include <doctest.h>

#include <random>

#include "blpack/rational.hpp"

using namespace blpack;

TEST_CASE("rational text round trip") {
    for (const char* s : {"0", "1", "-1", "3/4", "-7/3", "123456789012345678/7", "100000000000000000000000000001/3"}) {
        Rational q = Rational::parse(s);
        CHECK(q.str() == s);
        CHECK(Rational::parse(q.str()) == q);
    }
    CHECK(Rational::parse("6/8").str() == "3/4");
    CHECK(Rational::parse("-4/6").str() == "-2/3");
    CHECK_FALSE(Rational::try_parse("1/0"));
    CHECK_FALSE(Rational::try_parse("abc"));
    CHECK_FALSE(Rational::try_parse(""));
}

TEST_CASE("rational arithmetic agrees with boost rationals, including overflow") {
    std::mt19937_64 rng(11);
    auto draw = [&]() -> std::int64_t {
        switch (rng() % 3) {
            case 0: return static_cast<std::int64_t>(rng() % 100) - 50;
            case 1: return static_cast<std::int64_t>(rng() >> 2) - (std::int64_t{1} << 61);
            default: return static_cast<std::int64_t>(rng() % 2000000) + 1;
        }
    };
    for (int it = 0; it < 20000; ++it) {
        std::int64_t an = draw(), ad = draw(), bn = draw(), bd = draw();
        if (ad == 0) ad = 1;
        if (bd == 0) bd = 3;
        if (ad < 0 && ad > INT64_MIN) an = -an, ad = -ad;
        if (bd < 0 && bd > INT64_MIN) bn = -bn, bd = -bd;
        if (ad < 0 || bd < 0) continue;
        Rational a(an, ad), b(bn, bd);
        BigRational A{BigInt{an}, BigInt{ad}}, B{BigInt{bn}, BigInt{bd}};
        CHECK((a + b).to_big() == A + B);
        CHECK((a - b).to_big() == A - B);
        CHECK((a * b).to_big() == A * B);
        if (bn != 0) CHECK((a / b).to_big() == A / B);
        CHECK((a < b) == (A < B));
        CHECK((a == b) == (A == B));
        // spilled values come back inline when they shrink again
        if (bn != 0) CHECK(a * b / b == a);
    }
}

TEST_CASE("rational helpers") {
    CHECK(pow2(10) == 1024);
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(abs(Rational(-3, 5)) == Rational(3, 5));
    CHECK(Rational(6, 3).is_integer());
    CHECK(Rational(1, 3).hash() == Rational(2, 6).hash());
}
