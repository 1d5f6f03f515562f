#include "tyind/invariants.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "tyind/decompose.hpp"
#include "tyind/numtheory.hpp"

namespace tyind {

FinAbGroup reduced_group(const FinAbGroup& g, std::int64_t p, int k) {
    if (k < 1) fail("reduced_group: k must be at least 1");
    if (p < 2 || !is_prime(p)) fail("reduced_group: p must be prime");
    std::vector<std::int64_t> orders;
    for (const auto& f : g.factors())
        if (f.p == p && f.r == k) orders.push_back(p);
    return FinAbGroup(orders);
}

namespace {

// v_2 of the exponent of the 2-part.
int two_exponent_valuation(const FinAbGroup& g) {
    int v = 0;
    for (const auto& f : g.factors())
        if (f.p == 2) v = std::max(v, f.r);
    return v;
}

// Generators y_i = (n_i / gcd(n_i, 2^k)) e_i of G[2^k] restricted to the
// 2-part, as (factor index, multiplier) pairs.
std::vector<std::pair<int, std::int64_t>> torsion_generators(const FinAbGroup& g, int k) {
    std::vector<std::pair<int, std::int64_t>> out;
    for (int i = 0; i < g.rank(); ++i) {
        const auto& f = g.factors()[i];
        if (f.p != 2) continue;
        out.emplace_back(i, f.order / checked_pow(2, std::min(f.r, k)));
    }
    return out;
}

// Solve M t = v over F_2 by Gaussian elimination; M is square.
std::vector<int> solve_f2(std::vector<std::vector<int>> m, std::vector<int> v) {
    int n = int(v.size());
    std::vector<int> where(n, -1);
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int piv = -1;
        for (int a = row; a < n; ++a)
            if (m[a][col]) {
                piv = a;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[piv], m[row]);
        std::swap(v[piv], v[row]);
        for (int a = 0; a < n; ++a)
            if (a != row && m[a][col]) {
                for (int c = col; c < n; ++c) m[a][c] ^= m[row][c];
                v[a] ^= v[row];
            }
        where[col] = row;
        ++row;
    }
    std::vector<int> t(n, 0);
    for (int col = 0; col < n; ++col)
        if (where[col] >= 0) t[col] = v[where[col]];
    // Rows beyond the rank must have zero right-hand side.
    for (int a = row; a < n; ++a)
        if (v[a]) fail_domain("characteristic element: F2 system is inconsistent");
    return t;
}

}  // namespace

CharacteristicElement characteristic_element(const DiscForm& b, int k) {
    if (k < 1) fail("characteristic_element: k must be at least 1");
    if (!is_nondegenerate(b)) fail("characteristic_element: form is degenerate");
    CharacteristicElement out{zero_elem(b.group), false};
    if (k - 1 >= two_exponent_valuation(b.group)) return out;  // 2^{k-1} b(y,y) = 0 throughout

    auto gens = torsion_generators(b.group, k);
    int t = int(gens.size());
    std::int64_t half = checked_pow(2, k - 1);
    auto is_half = [&](int a, int c) {
        QZ val = b.gram[gens[a].first][gens[c].first]
                     .scaled(gens[a].second)
                     .scaled(gens[c].second)
                     .scaled(half);
        if (val.is_zero()) return 0;
        if (val == QZ::of(1, 2)) return 1;
        fail_domain("characteristic element: pairing value is not 0 or 1/2");
    };
    std::vector<std::vector<int>> m(t, std::vector<int>(t));
    std::vector<int> v(t);
    for (int a = 0; a < t; ++a) {
        v[a] = is_half(a, a);
        for (int c = 0; c < t; ++c) m[a][c] = is_half(a, c);
    }
    std::vector<int> sol = solve_f2(m, v);
    for (int a = 0; a < t; ++a)
        if (sol[a]) {
            int i = gens[a].first;
            out.rep[i] = mod_reduce(gens[a].second, b.group.factors()[i].order);
        }
    for (int a = 0; a < t; ++a) out.nonzero = out.nonzero || v[a] != 0;
    return out;
}

namespace {

// The 2-part of b as a standalone form (factors of odd order drop out; in
// canonical order the 2-part is a prefix).
DiscForm two_part(const DiscForm& b) {
    std::vector<int> idx;
    for (int i = 0; i < b.group.rank(); ++i)
        if (b.group.factors()[i].p == 2) idx.push_back(i);
    std::vector<std::int64_t> orders;
    for (int i : idx) orders.push_back(b.group.factors()[i].order);
    int n = int(idx.size());
    QZMat m(n, std::vector<QZ>(n));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) m[a][c] = b.gram[idx[a]][idx[c]];
    return DiscForm(FinAbGroup(orders), std::move(m));
}

}  // namespace

GaussValue varsigma(const DiscForm& b, int k) {
    if (k < 1) fail("varsigma: k must be at least 1");
    if (!is_nondegenerate(b)) fail("varsigma: form is degenerate");
    DiscForm b2 = two_part(b);
    if (k - 1 >= two_exponent_valuation(b2.group)) return GaussValue(1, 0);  // q_k vanishes

    // q_k(x) = 2^{k-1} b(x,x), a quadratic form with boundary 2^k b.
    std::int64_t half = checked_pow(2, k - 1);
    int n = b2.group.rank();
    std::vector<QZ> qd(n);
    QZMat m(n, std::vector<QZ>(n));
    for (int i = 0; i < n; ++i) {
        qd[i] = b2.gram[i][i].scaled(half);
        for (int j = 0; j < n; ++j) m[i][j] = b2.gram[i][j].scaled(2 * half);
    }
    GaussValue t = theta(QuadForm(b2.group, std::move(qd), std::move(m)));
    if (t.is_zero()) return t;
    if (t.radicand() != torsion_order(b2.group, 2 * half))
        fail_domain("varsigma: Gauss sum modulus is not |G[2^k]|");
    return GaussValue(1, t.phase());
}

SigmaValue sigma(const DiscForm& b, int k) {
    GaussValue v = varsigma(b, k);
    return v.is_zero() ? SigmaValue::inf() : SigmaValue{false, v.phase()};
}

bool isometry_test(const DiscForm& f1, const DiscForm& f2) {
    if (!is_nondegenerate(f1) || !is_nondegenerate(f2)) fail("isometry_test: degenerate form");
    if (!(f1.group == f2.group)) return false;

    // Odd parts: per (p, r), the number of blocks and the square class of the
    // product of their units (B contributes the non-residue class).
    auto odd_classes = [](const DiscForm& f) {
        std::map<std::pair<std::int64_t, int>, std::pair<int, int>> cls;  // (N, #B mod 2)
        for (const auto& blk : wall_decompose(f).blocks) {
            if (blk.p == 2) continue;
            auto& e = cls[{blk.p, blk.r}];
            e.first += 1;
            e.second ^= blk.tag == 'B' ? 1 : 0;
        }
        return cls;
    };
    if (odd_classes(f1) != odd_classes(f2)) return false;

    for (int k = 1; k <= two_exponent_valuation(f1.group); ++k)
        if (!(varsigma(f1, k) == varsigma(f2, k))) return false;
    return true;
}

}  // namespace tyind
