#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tyind {

[[noreturn]] inline void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

[[noreturn]] inline void fail_domain(const std::string& msg) {
    throw std::domain_error(msg);
}

constexpr std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Exact residue in Q/Z, kept normalized: 0 <= num < den, gcd(num, den) = 1.
class QZ {
public:
    QZ() : num_(0), den_(1) {}

    static QZ of(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }

    QZ operator+(const QZ& o) const;
    QZ operator-() const;
    QZ operator-(const QZ& o) const { return *this + (-o); }

    /// n * value, reduced mod 1.  Exact for any int64 n.
    QZ scaled(std::int64_t n) const;

    bool operator==(const QZ& o) const = default;

    std::string str() const;

private:
    QZ(std::int64_t n, std::int64_t d) : num_(n), den_(d) {}
    std::int64_t num_;
    std::int64_t den_;
};

/// Signed exact rational with overflow-checked arithmetic.
struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;  // den > 0, gcd(|num|, den) = 1

    static Rat of(std::int64_t n, std::int64_t d);
    static Rat integer(std::int64_t n) { return Rat{n, 1}; }

    Rat operator+(const Rat& o) const;
    Rat operator-() const { return Rat{-num, den}; }
    Rat operator-(const Rat& o) const { return *this + (-o); }
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    bool operator==(const Rat& o) const = default;
    bool is_zero() const { return num == 0; }
    double to_double() const { return double(num) / double(den); }

    std::string str() const;
};

}  // namespace tyind
