#include "tyind/numtheory.hpp"

#include <algorithm>
#include <random>

#include "tyind/rational.hpp"

namespace tyind {

using i128 = __int128;
using u64 = std::uint64_t;

std::int64_t mod_reduce(std::int64_t a, std::int64_t m) {
    if (m <= 0) fail("mod_reduce: modulus must be positive");
    a %= m;
    if (a < 0) a += m;
    return a;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return std::int64_t(i128(mod_reduce(a, m)) * mod_reduce(b, m) % m);
}

std::int64_t pow_mod(std::int64_t a, std::int64_t e, std::int64_t m) {
    if (e < 0) fail("pow_mod: negative exponent");
    if (m == 1) return 0;
    std::int64_t r = 1;
    a = mod_reduce(a, m);
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    if (m <= 0) fail("inv_mod: modulus must be positive");
    if (m == 1) return 0;
    std::int64_t r0 = m, r1 = mod_reduce(a, m);
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        std::int64_t t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) fail("inv_mod: argument not invertible");
    return mod_reduce(t0, m);
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::int64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    // Deterministic Miller-Rabin base set for 64-bit integers.
    for (std::int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::int64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

std::int64_t pollard_rho(std::int64_t n) {
    // n odd, composite, no factor below 40.
    std::mt19937_64 rng(u64(0x9E3779B97F4A7C15ull) ^ u64(n));
    while (true) {
        std::int64_t c = std::int64_t(rng() % u64(n - 1)) + 1;
        std::int64_t x = std::int64_t(rng() % u64(n));
        std::int64_t y = x, d = 1;
        while (d == 1) {
            x = (mul_mod(x, x, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            d = gcd64(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_into(std::int64_t n, std::vector<std::int64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    std::int64_t d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n < 1) fail("factorize: argument must be positive");
    std::vector<std::int64_t> primes;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    factor_into(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.push_back({p, 1});
    }
    return out;
}

std::optional<std::pair<std::int64_t, int>> as_prime_power(std::int64_t n) {
    if (n < 2) return std::nullopt;
    auto f = factorize(n);
    if (f.size() != 1) return std::nullopt;
    return f[0];
}

int vp(std::int64_t n, std::int64_t p) {
    if (n == 0) fail("vp: valuation of zero");
    if (p < 2) fail("vp: invalid prime");
    if (n < 0) n = -n;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int legendre(std::int64_t a, std::int64_t p) {
    a = mod_reduce(a, p);
    if (a == 0) return 0;
    return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::int64_t quadratic_nonresidue(std::int64_t p) {
    for (std::int64_t u = 2; u < p; ++u)
        if (legendre(u, p) == -1) return u;
    fail("quadratic_nonresidue: no non-residue found");
}

namespace {

// Tonelli-Shanks square root mod an odd prime; input a must be a residue unit.
std::int64_t sqrt_mod_prime(std::int64_t a, std::int64_t p) {
    if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
    std::int64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    std::int64_t z = quadratic_nonresidue(p);
    int m = s;
    std::int64_t c = pow_mod(z, q, p);
    std::int64_t t = pow_mod(a, q, p);
    std::int64_t r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        std::int64_t t2 = t;
        int i = 0;
        while (t2 != 1) {
            t2 = mul_mod(t2, t2, p);
            ++i;
        }
        std::int64_t b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

}  // namespace

std::optional<std::int64_t> sqrt_mod_odd_ppower(std::int64_t a, std::int64_t p, int r) {
    std::int64_t m = checked_pow(p, r);
    a = mod_reduce(a, m);
    if (a % p == 0) fail("sqrt_mod_odd_ppower: argument must be a unit");
    if (legendre(a, p) != 1) return std::nullopt;
    std::int64_t x = sqrt_mod_prime(a % p, p);
    // Newton lift, doubling precision each step.
    std::int64_t mk = p;
    while (mk < m) {
        i128 wide = i128(mk) * mk;
        mk = wide > m ? m : std::int64_t(wide);
        std::int64_t ainv_term = mul_mod(a, inv_mod(x, mk), mk);
        x = mul_mod(x + ainv_term, inv_mod(2, mk), mk);
    }
    if (mul_mod(x, x, m) != a) fail_domain("sqrt_mod_odd_ppower: lift failed");
    return x;
}

std::optional<std::int64_t> sqrt_mod_two_power(std::int64_t a, int r) {
    if (r < 1 || r > 62) fail("sqrt_mod_two_power: exponent out of range");
    std::int64_t m = std::int64_t(1) << r;
    a = mod_reduce(a, m);
    if (a % 2 == 0) fail("sqrt_mod_two_power: argument must be odd");
    if (r == 1) return 1;
    if (a % 4 != 1) return std::nullopt;
    if (r == 2) return 1;
    if (a % 8 != 1) return std::nullopt;
    // Bit-by-bit lift: x odd with x^2 = a mod 2^k; adding 2^(k-1) flips bit k of x^2.
    std::int64_t x = 1;
    for (int k = 3; k < r; ++k) {
        std::int64_t mk1 = std::int64_t(1) << (k + 1);
        if (mul_mod(x, x, mk1) != a % mk1) x += std::int64_t(1) << (k - 1);
    }
    if (mul_mod(x, x, m) != a) fail_domain("sqrt_mod_two_power: lift failed");
    return x;
}

std::int64_t checked_pow(std::int64_t n, int e) {
    if (e < 0) fail("checked_pow: negative exponent");
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, n);
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    i128 w = i128(a) * b;
    if (w > INT64_MAX || w < INT64_MIN) fail("checked_mul: overflow");
    return std::int64_t(w);
}

}  // namespace tyind
