#include "blpack/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace blpack {
namespace {

using u128 = unsigned __int128;

constexpr __int128 kMax64 = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kMin64 = -kMax64;  // keep INT64_MIN out so negation is always safe

u128 uabs(__int128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

BigInt to_bigint(__int128 v) {
    bool neg = v < 0;
    u128 u = uabs(v);
    BigInt r = static_cast<std::uint64_t>(u >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(u);
    return neg ? BigInt(-r) : r;
}

bool fits64(const BigInt& v) {
    static const BigInt lo = BigInt(static_cast<std::int64_t>(kMin64));
    static const BigInt hi = BigInt(static_cast<std::int64_t>(kMax64));
    return v >= lo && v <= hi;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    *this = from_i128(num, den);
}

Rational::Rational(const BigRational& v) { assign_big(v); }

Rational Rational::from_i128(__int128 num, __int128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    u128 g = gcd128(uabs(num), static_cast<u128>(den));
    if (g > 1) {
        num /= static_cast<__int128>(g);
        den /= static_cast<__int128>(g);
    }
    Rational r;
    if (num >= kMin64 && num <= kMax64 && den <= kMax64) {
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
    } else {
        r.assign_big(BigRational(to_bigint(num), to_bigint(den)));
    }
    return r;
}

void Rational::assign_big(const BigRational& v) {
    const BigInt n = boost::multiprecision::numerator(v);
    const BigInt d = boost::multiprecision::denominator(v);
    if (fits64(n) && fits64(d)) {
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
        big_.reset();
    } else {
        num_ = 0;
        den_ = 1;
        big_ = std::make_shared<const BigRational>(v);
    }
}

BigRational Rational::to_big() const {
    if (big_) return *big_;
    return BigRational(num_, den_);
}

BigInt Rational::numerator() const {
    return big_ ? BigInt(boost::multiprecision::numerator(*big_)) : BigInt(num_);
}

BigInt Rational::denominator() const {
    return big_ ? BigInt(boost::multiprecision::denominator(*big_)) : BigInt(den_);
}

int Rational::sign() const {
    if (big_) return big_->sign();
    return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const { return big_ ? denominator() == 1 : den_ == 1; }

BigInt Rational::floor() const {
    BigInt n = numerator();
    BigInt d = denominator();
    BigInt q = n / d;
    if (n < 0 && q * d != n) q -= 1;
    return q;
}

Rational Rational::operator-() const {
    if (big_) return Rational(BigRational(-*big_));
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (den_ == o.den_) {
            *this = from_i128(static_cast<__int128>(num_) + o.num_, den_);
        } else {
            __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
            __int128 d = static_cast<__int128>(den_) * o.den_;
            *this = from_i128(n, d);
        }
        return *this;
    }
    assign_big(to_big() + o.to_big());
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    if (!big_ && !o.big_) {
        // cross-reduce first so the 128-bit products stay exact
        u128 g1 = gcd128(uabs(num_), static_cast<u128>(o.den_));
        u128 g2 = gcd128(uabs(o.num_), static_cast<u128>(den_));
        __int128 a = num_, b = o.num_, c = den_, d = o.den_;
        if (g1 > 1) {
            a /= static_cast<__int128>(g1);
            d /= static_cast<__int128>(g1);
        }
        if (g2 > 1) {
            b /= static_cast<__int128>(g2);
            c /= static_cast<__int128>(g2);
        }
        *this = from_i128(a * b, c * d);
        return *this;
    }
    assign_big(to_big() * o.to_big());
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.sign() == 0) throw std::domain_error("rational: division by zero");
    if (!o.big_) {
        Rational inv;
        if (o.num_ < 0) {
            inv.num_ = -o.den_;
            inv.den_ = -o.num_;
        } else {
            inv.num_ = o.den_;
            inv.den_ = o.num_;
        }
        return *this *= inv;
    }
    assign_big(to_big() / o.to_big());
    return *this;
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical form: a small value is never stored big
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == b.den_) return a.num_ <=> b.num_;
        __int128 l = static_cast<__int128>(a.num_) * b.den_;
        __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }
    BigRational l = a.to_big();
    BigRational r = b.to_big();
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::size_t Rational::hash() const {
    if (!big_) {
        std::size_t h = std::hash<std::int64_t>{}(num_);
        return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
    return std::hash<std::string>{}(str());
}

std::string Rational::str() const {
    if (big_) {
        BigInt n = boost::multiprecision::numerator(*big_);
        BigInt d = boost::multiprecision::denominator(*big_);
        if (d == 1) return n.str();
        return n.str() + "/" + d.str();
    }
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
    if (!big_) return static_cast<double>(num_) / static_cast<double>(den_);
    return static_cast<double>(*big_);
}

std::optional<Rational> Rational::try_parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) -> std::optional<BigInt> {
        if (s.empty()) return std::nullopt;
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) return std::nullopt;
        for (std::size_t j = i; j < s.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(s[j]))) return std::nullopt;
        BigInt v(std::string(s.substr(i)));
        return neg ? BigInt(-v) : v;
    };
    text = trim(text);
    auto slash = text.find('/');
    std::optional<BigInt> n = parse_int(trim(text.substr(0, slash)));
    if (!n) return std::nullopt;
    BigInt d = 1;
    if (slash != std::string_view::npos) {
        auto dd = parse_int(trim(text.substr(slash + 1)));
        if (!dd || *dd == 0) return std::nullopt;
        d = *dd;
    }
    return Rational(BigRational(*n, d));
}

Rational Rational::parse(std::string_view text) {
    auto r = try_parse(text);
    if (!r) throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    return *r;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational pow2(int e) {
    BigInt v = 1;
    v <<= (e < 0 ? -e : e);
    return e < 0 ? Rational(BigRational(BigInt(1), v)) : Rational(BigRational(v));
}

}  // namespace blpack
