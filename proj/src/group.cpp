#include "tyind/group.hpp"

#include <algorithm>
#include <numeric>

#include "tyind/numtheory.hpp"
#include "tyind/rational.hpp"

namespace tyind {

namespace {

std::vector<CyclicFactor> make_factors(const std::vector<std::int64_t>& orders) {
    std::vector<CyclicFactor> fs;
    fs.reserve(orders.size());
    for (std::int64_t n : orders) {
        auto pr = as_prime_power(n);
        if (!pr) fail("FinAbGroup: factor order " + std::to_string(n) + " is not a prime power");
        fs.push_back({pr->first, pr->second, n});
    }
    return fs;
}

std::vector<int> canonical_order(const std::vector<CyclicFactor>& fs) {
    std::vector<int> ord(fs.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
        if (fs[a].p != fs[b].p) return fs[a].p < fs[b].p;
        return fs[a].r > fs[b].r;
    });
    return ord;
}

}  // namespace

FinAbGroup::FinAbGroup(const std::vector<std::int64_t>& prime_power_orders) {
    auto fs = make_factors(prime_power_orders);
    for (int i : canonical_order(fs)) factors_.push_back(fs[i]);
}

FinAbGroup FinAbGroup::with_perm(const std::vector<std::int64_t>& prime_power_orders,
                                 std::vector<int>& perm) {
    FinAbGroup g;
    auto fs = make_factors(prime_power_orders);
    auto ord = canonical_order(fs);
    perm.assign(fs.size(), 0);
    for (int pos = 0; pos < int(ord.size()); ++pos) {
        g.factors_.push_back(fs[ord[pos]]);
        perm[ord[pos]] = pos;
    }
    return g;
}

std::int64_t FinAbGroup::order() const {
    std::int64_t n = 1;
    for (const auto& f : factors_) n = checked_mul(n, f.order);
    return n;
}

std::int64_t FinAbGroup::exponent() const {
    std::int64_t e = 1;
    std::int64_t last_p = 0;
    for (const auto& f : factors_) {
        if (f.p != last_p) {
            // First (largest-r) factor of each prime carries the lcm contribution.
            e = checked_mul(e, f.order);
            last_p = f.p;
        }
    }
    return e;
}

std::string FinAbGroup::str() const {
    if (factors_.empty()) return "Z/1";
    std::string s;
    for (const auto& f : factors_) {
        if (!s.empty()) s += "+";
        s += "Z/" + std::to_string(f.order);
    }
    return s;
}

GroupElem zero_elem(const FinAbGroup& g) { return GroupElem(g.rank(), 0); }

GroupElem reduce_elem(const FinAbGroup& g, GroupElem x) {
    if (int(x.size()) != g.rank()) fail("reduce_elem: coordinate count mismatch");
    for (int i = 0; i < g.rank(); ++i) x[i] = mod_reduce(x[i], g.factors()[i].order);
    return x;
}

GroupElem add_elem(const FinAbGroup& g, const GroupElem& x, const GroupElem& y) {
    if (x.size() != y.size() || int(x.size()) != g.rank())
        fail("add_elem: coordinate count mismatch");
    GroupElem z(g.rank());
    for (int i = 0; i < g.rank(); ++i)
        z[i] = mod_reduce(x[i] + y[i], g.factors()[i].order);
    return z;
}

GroupElem neg_elem(const FinAbGroup& g, const GroupElem& x) {
    GroupElem z(g.rank());
    for (int i = 0; i < g.rank(); ++i)
        z[i] = mod_reduce(-x[i], g.factors()[i].order);
    return z;
}

GroupElem scale_elem(const FinAbGroup& g, std::int64_t n, const GroupElem& x) {
    GroupElem z(g.rank());
    for (int i = 0; i < g.rank(); ++i) {
        std::int64_t m = g.factors()[i].order;
        z[i] = mul_mod(mod_reduce(n, m), x[i], m);
    }
    return z;
}

std::int64_t element_order(const FinAbGroup& g, const GroupElem& x) {
    if (int(x.size()) != g.rank()) fail("element_order: coordinate count mismatch");
    std::int64_t o = 1;
    for (int i = 0; i < g.rank(); ++i) {
        std::int64_t n = g.factors()[i].order;
        std::int64_t oi = n / gcd64(n, mod_reduce(x[i], n));
        o = checked_mul(o / gcd64(o, oi), oi);
    }
    return o;
}

PVal p_valuation(const FinAbGroup& g, const GroupElem& x, std::int64_t p) {
    if (int(x.size()) != g.rank()) fail("p_valuation: coordinate count mismatch");
    std::int64_t o = 1;  // order of the p-component = max of per-factor orders
    for (int i = 0; i < g.rank(); ++i) {
        const auto& f = g.factors()[i];
        if (f.p != p) continue;
        std::int64_t oi = f.order / gcd64(f.order, mod_reduce(x[i], f.order));
        o = std::max(o, oi);
    }
    if (o == 1) return PVal{true, 0};
    return PVal{false, -vp(o, p)};
}

std::int64_t torsion_order(const FinAbGroup& g, std::int64_t k) {
    if (k < 1) fail("torsion_order: k must be positive");
    std::int64_t n = 1;
    for (const auto& f : g.factors()) n = checked_mul(n, gcd64(f.order, k));
    return n;
}

std::vector<SylowPart> sylow_parts(const FinAbGroup& g) {
    std::vector<SylowPart> parts;
    for (int i = 0; i < g.rank(); ++i) {
        std::int64_t p = g.factors()[i].p;
        if (parts.empty() || parts.back().p != p) parts.push_back({p, {}});
        parts.back().idx.push_back(i);
    }
    return parts;
}

void enumerate(const FinAbGroup& g, const std::function<void(const GroupElem&)>& fn) {
    GroupElem x = zero_elem(g);
    while (true) {
        fn(x);
        int i = g.rank() - 1;
        while (i >= 0) {
            if (++x[i] < g.factors()[i].order) break;
            x[i] = 0;
            --i;
        }
        if (i < 0) return;
    }
}

FinAbGroup parse_group_spec(const std::string& spec) {
    std::string s;
    for (char c : spec)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) fail("parse_group_spec: empty spec");
    std::vector<std::int64_t> orders;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find('+', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
        pos = next == std::string::npos ? s.size() : next + 1;
        if (tok.size() < 3 || (tok[0] != 'Z' && tok[0] != 'z') || tok[1] != '/')
            fail("parse_group_spec: expected Z/<n>, got '" + tok + "'");
        std::int64_t n = 0;
        for (std::size_t i = 2; i < tok.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(tok[i])))
                fail("parse_group_spec: bad order in '" + tok + "'");
            n = checked_mul(n, 10) + (tok[i] - '0');
        }
        if (n < 1) fail("parse_group_spec: order must be >= 1");
        for (auto [p, r] : factorize(n)) orders.push_back(checked_pow(p, r));
    }
    return FinAbGroup(orders);
}

}  // namespace tyind
