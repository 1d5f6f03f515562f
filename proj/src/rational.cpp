#include "tyind/rational.hpp"

namespace tyind {

using i128 = __int128;

QZ QZ::of(std::int64_t num, std::int64_t den) {
    if (den == 0) fail("QZ: zero denominator");
    if (den < 0) {
        den = -den;
        num = -num;
    }
    num %= den;
    if (num < 0) num += den;
    std::int64_t g = gcd64(num, den);
    return QZ(num / g, den / g);
}

QZ QZ::operator+(const QZ& o) const {
    // Work over the lcm denominator; result always fits since den | lcm(den_, o.den_).
    std::int64_t g0 = gcd64(den_, o.den_);
    i128 d = i128(den_ / g0) * o.den_;
    i128 n = (i128(num_) * (o.den_ / g0) + i128(o.num_) * (den_ / g0)) % d;
    i128 a = n, b = d;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a == 0) return QZ(0, 1);
    if (d / a > INT64_MAX) fail("QZ: overflow");
    return QZ(std::int64_t(n / a), std::int64_t(d / a));
}

QZ QZ::operator-() const {
    if (num_ == 0) return *this;
    return QZ(den_ - num_, den_);
}

QZ QZ::scaled(std::int64_t n) const {
    i128 m = i128(n) % den_;
    if (m < 0) m += den_;
    i128 v = (m * num_) % den_;
    std::int64_t g = gcd64(std::int64_t(v), den_);
    return QZ(std::int64_t(v) / g, den_ / g);
}

std::string QZ::str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

Rat make_checked(i128 n, i128 d) {
    if (d == 0) fail("Rat: zero denominator");
    if (d < 0) {
        d = -d;
        n = -n;
    }
    i128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a == 0) a = 1;
    n /= a;
    d /= a;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
        fail("Rat: overflow");
    return Rat{std::int64_t(n), std::int64_t(d)};
}

}  // namespace

Rat Rat::of(std::int64_t n, std::int64_t d) { return make_checked(n, d); }

Rat Rat::operator+(const Rat& o) const {
    return make_checked(i128(num) * o.den + i128(o.num) * den, i128(den) * o.den);
}

Rat Rat::operator*(const Rat& o) const {
    return make_checked(i128(num) * o.num, i128(den) * o.den);
}

Rat Rat::operator/(const Rat& o) const {
    if (o.num == 0) fail("Rat: division by zero");
    return make_checked(i128(num) * o.den, i128(den) * o.num);
}

std::string Rat::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace tyind
