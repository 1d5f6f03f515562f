#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace tyind {

/// a mod m, reduced into [0, m).  m > 0.
std::int64_t mod_reduce(std::int64_t a, std::int64_t m);

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t pow_mod(std::int64_t a, std::int64_t e, std::int64_t m);

/// Inverse of a mod m; requires gcd(a, m) = 1.
std::int64_t inv_mod(std::int64_t a, std::int64_t m);

bool is_prime(std::int64_t n);

/// Prime factorization of n >= 1, sorted by prime.  factorize(1) = {}.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// (p, r) with n = p^r, r >= 1, if n is a prime power.
std::optional<std::pair<std::int64_t, int>> as_prime_power(std::int64_t n);

/// p-adic valuation of n != 0.
int vp(std::int64_t n, std::int64_t p);
inline int v2(std::int64_t n) { return vp(n, 2); }

/// Legendre symbol (a|p) in {-1, 0, 1}; p an odd prime.
int legendre(std::int64_t a, std::int64_t p);

/// Smallest quadratic non-residue mod an odd prime p.
std::int64_t quadratic_nonresidue(std::int64_t p);

/// x with x^2 = a (mod p^r) for odd prime p and a a unit mod p;
/// nullopt when a is a non-residue mod p.
std::optional<std::int64_t> sqrt_mod_odd_ppower(std::int64_t a, std::int64_t p, int r);

/// x with x^2 = a (mod 2^r) for odd a; exists iff a = 1 mod min(2^r, 8).
std::optional<std::int64_t> sqrt_mod_two_power(std::int64_t a, int r);

/// n^e for small exact powers; fails on int64 overflow.
std::int64_t checked_pow(std::int64_t n, int e);

/// a * b with overflow check.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace tyind
