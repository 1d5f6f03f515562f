#include "tyind/gauss.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "tyind/numtheory.hpp"
#include "tyind/ty.hpp"

namespace tyind {

GaussValue::GaussValue(std::int64_t radicand, int phase) : radicand_(radicand) {
    if (radicand < 0) fail("GaussValue: negative radicand");
    phase_ = radicand_ == 0 ? 0 : ((phase % 8) + 8) % 8;
}

GaussValue GaussValue::operator*(const GaussValue& o) const {
    if (is_zero() || o.is_zero()) return zero();
    return GaussValue(checked_mul(radicand_, o.radicand_), phase_ + o.phase_);
}

std::complex<double> GaussValue::to_complex() const {
    if (is_zero()) return 0.0;
    static const double h = std::sqrt(0.5);
    static const double re[8] = {1, h, 0, -h, -1, -h, 0, h};
    static const double im[8] = {0, h, 1, h, 0, -h, -1, -h};
    double m = std::sqrt(double(radicand_));
    return {m * re[phase_], m * im[phase_]};
}

std::string GaussValue::str() const {
    if (is_zero()) return "0";
    std::string s;
    if (radicand_ != 1) s = "sqrt(" + std::to_string(radicand_) + ")";
    if (phase_ != 0) {
        if (!s.empty()) s += "*";
        s += "e(" + std::to_string(phase_) + "/8)";
    }
    return s.empty() ? "1" : s;
}

namespace {

// e(alpha/8) phase and the parity of (alpha^2 - 1)/8 for the four 2-adic
// units alpha = 1, -1, 5, -5 behind tags A, B, C, D.
int two_unit_phase(char tag) {
    switch (tag) {
        case 'A': return 1;
        case 'B': return 7;
        case 'C': return 5;
        default: return 3;  // 'D'
    }
}

int two_unit_parity(char tag) { return (tag == 'C' || tag == 'D') ? 1 : 0; }

// (2 alpha / p)^r eps_{p^r} as a phase mod 8, for the rank-1 odd-p blocks.
int odd_phase(char tag, std::int64_t p, int r) {
    std::int64_t alpha = tag == 'A' ? 1 : quadratic_nonresidue(p);
    int sign = legendre(mod_reduce(2 * alpha, p), p);
    int phase = (sign < 0 && r % 2 != 0) ? 4 : 0;
    if (pow_mod(p, r, 4) == 3) phase += 2;  // eps = i
    return phase;
}

}  // namespace

GaussValue theta_irreducible(const IrreducibleBlock& b) {
    check_block(b);
    if (b.p != 2) return GaussValue(1, odd_phase(b.tag, b.p, b.r));
    switch (b.tag) {
        case 'E': return GaussValue(1, 0);
        case 'F': return GaussValue(1, 4 * b.r);
        default:
            return GaussValue(1, two_unit_phase(b.tag) + 4 * b.r * two_unit_parity(b.tag));
    }
}

GaussValue theta_scaled(const IrreducibleBlock& b, int s) {
    check_block(b);
    if (s < 0) fail("theta_scaled: negative scale exponent");
    if (b.p != 2) {
        // p^s q vanishes once s reaches r; below that it induces the same-unit
        // form on Z/p^{r-s}.
        if (s >= b.r) return GaussValue(checked_pow(b.p, b.r), 0);
        return GaussValue(checked_pow(b.p, s), odd_phase(b.tag, b.p, b.r - s));
    }
    if (b.tag == 'E' || b.tag == 'F') {
        // Modulus 2^r: the scaled form vanishes at s >= r; below, each class
        // mod 2^{r-s} is hit 4^s times and the small form is the same tag.
        if (s >= b.r) return GaussValue(checked_pow(2, 2 * b.r), 0);
        int phase = b.tag == 'F' ? 4 * (b.r - s) : 0;
        return GaussValue(checked_pow(2, 2 * s), phase);
    }
    // Rank-1 2-adic: modulus 2^{r+1}, so s = r leaves the parity form, whose
    // sum cancels exactly; s > r kills the form.
    if (s == b.r) return GaussValue::zero();
    if (s > b.r) return GaussValue(checked_pow(2, b.r), 0);
    return GaussValue(checked_pow(2, s),
                      two_unit_phase(b.tag) + 4 * (b.r - s) * two_unit_parity(b.tag));
}

namespace {

GaussValue theta_nondegenerate(const QuadForm& q) {
    if (q.group.rank() == 0) return GaussValue();
    GaussValue v;
    for (const auto& blk : wall_decompose(q).blocks) v = v * theta_irreducible(blk);
    return v;
}

GaussValue theta_component(const QuadForm& q) {
    Subgroup rad = radical(q);
    if (rad.order == 1) return theta_nondegenerate(q);
    // q restricted to the radical is a homomorphism, so it vanishes there
    // exactly when it vanishes on the radical's generators.
    for (const auto& gen : rad.generators)
        if (!eval_q(q, gen).is_zero()) return GaussValue::zero();
    QuotientResult quot = quotient_by_radical(q);
    return GaussValue(rad.order, 0) * theta_nondegenerate(quot.form);
}

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

GaussValue theta(const QuadForm& q) {
    int n = q.group.rank();
    if (n == 0) return GaussValue();
    // Factors in different orthogonal components never mix under the radical
    // or the decomposition, so handle each component separately; this also
    // keeps product groups with huge total order tractable.
    Dsu dsu(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!q.bgram[i][j].is_zero()) dsu.unite(i, j);
    std::vector<std::vector<int>> comps(n);
    for (int i = 0; i < n; ++i) comps[dsu.find(i)].push_back(i);

    GaussValue v;
    for (const auto& idx : comps) {
        if (idx.empty()) continue;
        std::vector<std::int64_t> orders;
        for (int i : idx) orders.push_back(q.group.factors()[i].order);
        // idx is ascending, so the factor list is already canonically ordered
        // and positions carry over unchanged.
        FinAbGroup sub(orders);
        int m = int(idx.size());
        std::vector<QZ> qd(m);
        QZMat bg(m, std::vector<QZ>(m));
        for (int a = 0; a < m; ++a) {
            qd[a] = q.qdiag[idx[a]];
            for (int c = 0; c < m; ++c) bg[a][c] = q.bgram[idx[a]][idx[c]];
        }
        v = v * theta_component(QuadForm(std::move(sub), std::move(qd), std::move(bg)));
        if (v.is_zero()) return v;
    }
    return v;
}

std::int64_t oracle_cap() {
    if (const char* s = std::getenv("TYIND_ORACLE_CAP")) {
        char* end = nullptr;
        long long v = std::strtoll(s, &end, 10);
        if (end != s && *end == '\0' && v > 0) return v;
    }
    return std::int64_t(1) << 20;
}

namespace {

// All phase bookkeeping for the enumeration oracles happens in integer
// multiples of 1/ell with ell = 2 exp(G), which every entry of q and dq
// divides; floating point enters only at the final phase-to-unit-circle step.
struct PhaseTables {
    std::int64_t ell;
    std::vector<std::int64_t> qn;
    std::vector<std::vector<std::int64_t>> bn;

    explicit PhaseTables(const QuadForm& f) {
        int n = f.group.rank();
        ell = checked_mul(2, f.group.exponent());
        qn.resize(n);
        bn.assign(n, std::vector<std::int64_t>(n));
        for (int i = 0; i < n; ++i) {
            qn[i] = mod_reduce(f.qdiag[i].num() * (ell / f.qdiag[i].den()), ell);
            for (int j = 0; j < n; ++j)
                bn[i][j] = mod_reduce(f.bgram[i][j].num() * (ell / f.bgram[i][j].den()), ell);
        }
    }
};

// Walk all of G depth-first, handing (coordinates, q(x) as a multiple of
// 1/ell) to the sink.  The phase is maintained incrementally: stepping
// x_i -> x_i + 1 adds (2 x_i + 1) q_i + sum_{j<i} x_j b_ij.
template <typename Sink>
void enumerate_phases(const QuadForm& f, const PhaseTables& t, Sink&& sink) {
    int n = f.group.rank();
    std::vector<std::int64_t> x(n, 0);
    auto rec = [&](auto&& self, int i, std::int64_t phase) -> void {
        if (i == n) {
            sink(x, phase);
            return;
        }
        std::int64_t cross = 0;
        for (int j = 0; j < i; ++j) cross = (cross + mul_mod(x[j], t.bn[i][j], t.ell)) % t.ell;
        std::int64_t o = f.group.factors()[i].order;
        std::int64_t ph = phase;
        std::int64_t delta = (t.qn[i] + cross) % t.ell;
        std::int64_t ddelta = mod_reduce(2 * t.qn[i], t.ell);
        for (std::int64_t v = 0; v < o; ++v) {
            x[i] = v;
            self(self, i + 1, ph);
            ph = (ph + delta) % t.ell;
            delta = (delta + ddelta) % t.ell;
        }
        x[i] = 0;
    };
    rec(rec, 0, 0);
}

struct KahanSum {
    double hi = 0, lo = 0;
    void add(double v) {
        double y = v - lo;
        double t = hi + y;
        lo = (t - hi) - y;
        hi = t;
    }
};

std::vector<std::complex<double>> unit_table(std::int64_t ell) {
    std::vector<std::complex<double>> e(ell);
    const double tau = 8 * std::atan(1.0);
    for (std::int64_t j = 0; j < ell; ++j)
        e[j] = std::polar(1.0, tau * double(j) / double(ell));
    return e;
}

}  // namespace

std::complex<double> theta_bruteforce(const QuadForm& f) {
    auto size = order_bounded(f.group, oracle_cap());
    if (!size) fail("theta_bruteforce: group order exceeds the oracle cap");
    PhaseTables t(f);
    // Tally how often each phase occurs, then sum count * e(phase/ell); the
    // rounding error is governed by the ell-term final sum, not by |G|.
    std::vector<std::int64_t> cnt(t.ell, 0);
    enumerate_phases(f, t, [&](const std::vector<std::int64_t>&, std::int64_t ph) { ++cnt[ph]; });
    const double tau = 8 * std::atan(1.0);
    KahanSum re, im;
    for (std::int64_t j = 0; j < t.ell; ++j) {
        if (cnt[j] == 0) continue;
        double a = tau * double(j) / double(t.ell);
        re.add(double(cnt[j]) * std::cos(a));
        im.add(double(cnt[j]) * std::sin(a));
    }
    double norm = std::sqrt(double(*size));
    return {re.hi / norm, im.hi / norm};
}

PowsumResult powsum_check(const DiscForm& b, std::int64_t k) {
    if (k < 1) fail("powsum_check: k must be at least 1");
    std::int64_t cap = oracle_cap();
    auto size = order_bounded(b.group, cap);
    if (!size || *size > cap / *size)
        fail("powsum_check: enumeration exceeds the oracle cap");
    QuadForm q = lift_quadratic(b);  // rejects degenerate b

    int n = b.group.rank();
    PhaseTables t(q);
    std::vector<std::vector<std::int64_t>> elems;
    std::vector<std::int64_t> phq;
    elems.reserve(std::size_t(*size));
    phq.reserve(std::size_t(*size));
    enumerate_phases(q, t, [&](const std::vector<std::int64_t>& x, std::int64_t ph) {
        elems.push_back(x);
        phq.push_back(ph);
    });

    std::vector<std::complex<double>> e = unit_table(t.ell);
    double norm = std::sqrt(double(*size));
    KahanSum lre, lim;
    for (const auto& y : elems) {
        // mu(x) chi(x, y) has phase q(x) - b(x, y); ell_i collects b(e_i, y).
        std::vector<std::int64_t> lin(n);
        for (int i = 0; i < n; ++i) {
            std::int64_t acc = 0;
            for (int j = 0; j < n; ++j) acc = (acc + mul_mod(y[j], t.bn[i][j], t.ell)) % t.ell;
            lin[i] = acc;
        }
        KahanSum sre, sim;
        for (std::size_t a = 0; a < elems.size(); ++a) {
            std::int64_t ph = phq[a];
            for (int i = 0; i < n; ++i)
                ph = (ph + t.ell - mul_mod(elems[a][i], lin[i], t.ell)) % t.ell;
            sre.add(e[ph].real());
            sim.add(e[ph].imag());
        }
        std::complex<double> s(sre.hi / norm, sim.hi / norm);
        std::complex<double> pw = 1;
        for (std::int64_t a = 0; a < k; ++a) pw *= s;
        lre.add(pw.real());
        lim.add(pw.imag());
    }
    GaussValue rhs = GaussValue(*size, 0) * theta(fk_form(q, k));
    return {{lre.hi, lim.hi}, rhs};
}

}  // namespace tyind
