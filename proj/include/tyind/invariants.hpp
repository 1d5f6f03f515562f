#pragma once

#include <cstdint>
#include <string>

#include "tyind/forms.hpp"
#include "tyind/gauss.hpp"
#include "tyind/group.hpp"

namespace tyind {

/// sigma_k: an integer mod 8 or infinity, with n + inf = inf.
struct SigmaValue {
    bool infinite = false;
    int value = 0;  // in [0, 8); meaningful only when finite

    static SigmaValue inf() { return {true, 0}; }
    bool operator==(const SigmaValue&) const = default;
    std::string str() const { return infinite ? "infinity" : std::to_string(value); }
};

/// The reduced group G~_p^k = G[p^k] / (G[p^{k-1}] + p G[p^{k+1}]):
/// elementary abelian of rank = the number of Z/p^k factors of G.
FinAbGroup reduced_group(const FinAbGroup& g, std::int64_t p, int k);

/// c^k(b): any c in G[2^k] with 2^{k-1} b(x,x) = 2^{k-1} b(x,c) on G[2^k].
/// `nonzero` reports whether its class in the reduced group is nonzero,
/// which happens exactly when some 2^{k-1} b(y,y) = 1/2 on a torsion
/// generator.
struct CharacteristicElement {
    GroupElem rep;
    bool nonzero = false;
};
CharacteristicElement characteristic_element(const DiscForm& b, int k);

/// varsigma_k(b) = e(sigma_k/8), or 0 when sigma_k is infinite; computed from
/// Theta(G_2, 2^{k-1} b(x,x)) = sqrt(|G[2^k]|) varsigma_k.  The odd part of G
/// is ignored; b itself must be non-degenerate.
GaussValue varsigma(const DiscForm& b, int k);
SigmaValue sigma(const DiscForm& b, int k);

/// Isometry of non-degenerate discriminant forms: groups must be equal (the
/// canonical factor list is a complete group invariant), the odd parts must
/// agree per (p, r) in rank and determinant square class, and the 2-parts
/// must have equal varsigma_k for every k up to v_2 of the 2-part exponent
/// (beyond that the reduced groups vanish and sigma_k is identically 0).
bool isometry_test(const DiscForm& f1, const DiscForm& f2);

}  // namespace tyind
