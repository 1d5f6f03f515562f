#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include "tyind/decompose.hpp"
#include "tyind/forms.hpp"

namespace tyind {

/// Value of a quadratic Gauss sum: sqrt(radicand) * e(phase/8), or zero.
/// Every Gauss sum this library produces has that shape, so the type is
/// closed under the products it needs.  Zero is encoded as radicand = 0
/// (its phase is fixed at 0); nonzero radicands multiply exactly, with no
/// square-free reduction needed because sqrt(m) e(a/8) = sqrt(m') e(a'/8)
/// already forces m = m'.
class GaussValue {
public:
    GaussValue() = default;  // the value 1
    GaussValue(std::int64_t radicand, int phase);
    static GaussValue zero() { return GaussValue(0, 0); }

    std::int64_t radicand() const { return radicand_; }
    int phase() const { return phase_; }  // in [0, 8); 0 for the zero value
    bool is_zero() const { return radicand_ == 0; }

    GaussValue operator*(const GaussValue& o) const;
    bool operator==(const GaussValue&) const = default;

    std::complex<double> to_complex() const;
    std::string str() const;  // "0", "1", "e(3/8)", "sqrt(8)*e(3/8)", ...

private:
    std::int64_t radicand_ = 1;
    int phase_ = 0;
};

/// Theta of an irreducible block's quadratic form (closed form).
GaussValue theta_irreducible(const IrreducibleBlock& b);

/// Theta of the block's quadratic form scaled pointwise by p^s, s >= 0.
GaussValue theta_scaled(const IrreducibleBlock& b, int s);

/// Theta(G, q) = |G|^{-1/2} sum_x e(q(x)) for any form, degenerate allowed:
/// zero when q is nontrivial on the radical of dq, otherwise
/// sqrt(|rad|) times the Theta of the induced non-degenerate quotient form.
GaussValue theta(const QuadForm& q);

/// The same sum evaluated term by term in double precision.  Enumerates G;
/// requires |G| <= the oracle cap (default 2^20, override with the
/// TYIND_ORACLE_CAP environment variable).
std::complex<double> theta_bruteforce(const QuadForm& q);

std::int64_t oracle_cap();

/// Both sides of the power-sum identity for a non-degenerate b:
/// lhs enumerates C_chi = {e(q(.)) chi(., y)} and sums the k-th powers of the
/// normalized character sums; rhs is sqrt(|G|) * Theta of the sum-zero form.
struct PowsumResult {
    std::complex<double> lhs;
    GaussValue rhs;
};
PowsumResult powsum_check(const DiscForm& b, std::int64_t k);

}  // namespace tyind
