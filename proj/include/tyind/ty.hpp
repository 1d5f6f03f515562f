#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tyind/decompose.hpp"
#include "tyind/forms.hpp"
#include "tyind/gauss.hpp"

namespace tyind {

/// T_k: the (k-1) x (k-1) matrix I + J (diagonal 2, off-diagonal 1), det = k.
std::vector<std::vector<std::int64_t>> t_matrix(std::int64_t k);

/// (G^{k-1}, T_k (x) q), isometric to the sum-zero subgroup form
/// {(x_1,...,x_k) : sum x_i = 0} with q applied coordinatewise.  k = 1 gives
/// the trivial-group form.
QuadForm fk_form(const QuadForm& q, std::int64_t k);

/// TY(G, chi, tau): simple objects G and m, chi(x, y) = e(-b(x, y)),
/// tau = tau_sign / sqrt(|G|).  b must be non-degenerate.
struct TYCategory {
    FinAbGroup group;
    DiscForm bform;
    int tau_sign;

    TYCategory(DiscForm b, int tau);
};

/// Congruence normal form of T_k over Z/2^r: S^t T_k S = s1 hexagonal
/// ((2,1),(1,2)) blocks, then s2 hyperbolic ((0,1),(1,0)) blocks, then for
/// even k a 1x1 corner beta * 2^{v_2(k)} with beta in {1, -1, 5, -5} read
/// mod 8.  S has odd determinant; the congruence is verified mod 2^r.
struct TkDecomposition {
    int s1 = 0;
    int s2 = 0;
    std::optional<int> beta;  // present iff k is even
    IMat witness;
};
TkDecomposition decompose_tk(std::int64_t k, int r);

/// Theta(F_k) of a single odd irreducible block (A/B on Z/p^r): diagonalize
/// T_k by congruence over Z/p^r and multiply the resulting k-1 rank-one
/// scaled Gauss sums.
GaussValue theta_fk_closed_odd(const IrreducibleBlock& b, std::int64_t k);

/// (-1)^{r(k-1) - min(r, v_p(k))}: the exact ratio between Theta(F_k) of the
/// A-class and of the B-class block on Z/p^r, p odd.
int theta_fk_compare_odd(std::int64_t p, int r, std::int64_t k);

/// Theta(G^{k-1}, T_k (x) q) for a non-degenerate q on a 2-group, any k >= 1.
/// Even k = 2^n a: (-1)^Gamma sqrt(|G[2^n]|) varsigma_n(dq)^beta with
/// Gamma = sum_r N_r (r s1 + max(r - n, 0)(beta^2 - 1)/8) and beta the corner
/// unit of T_k, read off closed-form (odd squares are 1 mod 8).  Odd k:
/// (-1)^{s1 sum_r r N_r}, independent of q.
GaussValue theta_fk_closed_two(const QuadForm& q, std::int64_t k);

/// nu_n(m_C): Zero for odd n; for n = 2k, sign(tau)^k Theta(F_k(G, q)) with q
/// any quadratic lift of b.  Computed per Sylow part by the closed forms and
/// cross-checked against the general quotient-based theta while the blown-up
/// rank stays small.
GaussValue indicator_m(const TYCategory& c, std::int64_t n);

/// Sum of nu_k over the invertible simple objects: |G[k]|.
std::int64_t indicator_sum_invertibles(const TYCategory& c, std::int64_t k);

/// Exact value in Q(zeta_8) + Q(zeta_8) sqrt(d), zeta = e(1/8): coordinates
/// on {1, zeta, zeta^2, zeta^3} for the rational-radicand split.  Radicands
/// are kept odd, squarefree and positive: square factors fold into the
/// coefficients and sqrt(2) = zeta - zeta^3 folds into the basis, so equal
/// values always have identical coordinates.
class AlgebraicValue {
public:
    AlgebraicValue() = default;  // zero

    static AlgebraicValue rational(const Rat& r);
    /// coeff * zeta^pow * sqrt(m), m >= 0.
    static AlgebraicValue radical(const Rat& coeff, int zeta_pow, std::int64_t m);

    const std::array<Rat, 4>& base() const { return base_; }
    const std::array<Rat, 4>& rad_coeff() const { return rad_; }
    std::int64_t radicand() const { return radicand_; }

    AlgebraicValue operator+(const AlgebraicValue& o) const;
    AlgebraicValue operator*(const Rat& s) const;
    bool operator==(const AlgebraicValue&) const = default;

    bool is_rational() const;
    std::complex<double> to_complex() const;
    std::string str() const;

private:
    void add_zeta(bool into_rad, int pow, const Rat& c);

    std::array<Rat, 4> base_{};
    std::array<Rat, 4> rad_{};
    std::int64_t radicand_ = 1;
};

/// |L_{k,1}|_C = (|G[k]| + sqrt(|G|) nu_k(m_C)) / (2|G|), assembled exactly
/// and cross-checked against the pdim-weighted sum over simple objects.
AlgebraicValue lens_invariant(const TYCategory& c, std::int64_t k);

/// Equivalence decision with witness.  Equivalent iff the groups are equal,
/// the tau signs are equal and the bilinear forms are isometric; otherwise
/// witness_k is an indicator index at which the categories' indicator data
/// (the invertible-object sum or nu(m)) provably differ, verified by exact
/// evaluation before returning.
struct DistinguishResult {
    bool equivalent = false;
    std::optional<std::int64_t> witness_k;
    std::string reason;  // "torsion", "tau", "odd-part", "two-part" or "scan"
};
DistinguishResult distinguish(const TYCategory& c1, const TYCategory& c2);

}  // namespace tyind
