#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace blpack {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exact fraction in lowest terms with a positive denominator.
// Values whose numerator and denominator fit in int64 are kept inline;
// anything larger spills to an arbitrary-precision representation.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : num_(v), den_(1) {}           // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const BigRational& v);

    static Rational parse(std::string_view text);
    static std::optional<Rational> try_parse(std::string_view text);

    std::string str() const;
    double to_double() const;
    BigRational to_big() const;
    BigInt numerator() const;
    BigInt denominator() const;

    bool is_small() const { return !big_; }
    std::int64_t small_num() const { return num_; }
    std::int64_t small_den() const { return den_; }

    int sign() const;
    bool is_integer() const;
    BigInt floor() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    std::size_t hash() const;

private:
    void assign_big(const BigRational& v);
    static Rational from_i128(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::shared_ptr<const BigRational> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

Rational abs(const Rational& q);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational pow2(int e);

struct RationalHash {
    std::size_t operator()(const Rational& q) const { return q.hash(); }
};

}  // namespace blpack
