#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tyind {

/// One cyclic factor Z/p^r.
struct CyclicFactor {
    std::int64_t p;
    int r;
    std::int64_t order;  // p^r
    bool operator==(const CyclicFactor&) const = default;
};

/// Finite abelian group as an ordered direct sum of prime-power cyclic factors,
/// kept in canonical order: p ascending, then r descending within each prime.
/// The constructor is strict: every entry must itself be a prime power >= 2.
class FinAbGroup {
public:
    FinAbGroup() = default;  // trivial group
    explicit FinAbGroup(const std::vector<std::int64_t>& prime_power_orders);

    /// Same group, plus perm[i] = canonical position of input factor i.
    static FinAbGroup with_perm(const std::vector<std::int64_t>& prime_power_orders,
                                std::vector<int>& perm);

    const std::vector<CyclicFactor>& factors() const { return factors_; }
    int rank() const { return int(factors_.size()); }
    std::int64_t order() const;     // fails on int64 overflow
    std::int64_t exponent() const;  // lcm of factor orders

    bool operator==(const FinAbGroup&) const = default;

    std::string str() const;  // "Z/8+Z/8+Z/3"; trivial group prints "Z/1"

private:
    std::vector<CyclicFactor> factors_;
};

/// Element as a reduced coordinate vector (0 <= x_i < order_i), one per factor.
using GroupElem = std::vector<std::int64_t>;

GroupElem zero_elem(const FinAbGroup& g);
GroupElem reduce_elem(const FinAbGroup& g, GroupElem x);
GroupElem add_elem(const FinAbGroup& g, const GroupElem& x, const GroupElem& y);
GroupElem neg_elem(const FinAbGroup& g, const GroupElem& x);
GroupElem scale_elem(const FinAbGroup& g, std::int64_t n, const GroupElem& x);

std::int64_t element_order(const FinAbGroup& g, const GroupElem& x);

/// Valuation of an element of the p-part: v_p(x) = -log_p(order of x's p-component),
/// with v_p = +infinity when that component vanishes.
struct PVal {
    bool infinite = false;
    int v = 0;

    bool operator==(const PVal&) const = default;
    bool operator<(const PVal& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return v < o.v;
    }
};

PVal p_valuation(const FinAbGroup& g, const GroupElem& x, std::int64_t p);

/// |G[k]| = #{x : kx = 0} = prod_i gcd(order_i, k).
std::int64_t torsion_order(const FinAbGroup& g, std::int64_t k);

/// Factor indices of each Sylow p-part (contiguous in canonical order).
struct SylowPart {
    std::int64_t p;
    std::vector<int> idx;
};
std::vector<SylowPart> sylow_parts(const FinAbGroup& g);

/// Visit every element of g (coordinates in odometer order).
void enumerate(const FinAbGroup& g, const std::function<void(const GroupElem&)>& fn);

/// Parse "Z/8+Z/8+Z/3".  Composite orders are factored into their prime-power
/// parts ("Z/12" means Z/4+Z/3); "Z/1" contributes nothing.
FinAbGroup parse_group_spec(const std::string& spec);

}  // namespace tyind
