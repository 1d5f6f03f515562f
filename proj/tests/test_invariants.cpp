#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <map>
#include <random>
#include <vector>

#include "tyind/decompose.hpp"
#include "tyind/forms.hpp"
#include "tyind/gauss.hpp"
#include "tyind/invariants.hpp"
#include "tyind/numtheory.hpp"
#include "tyind/rational.hpp"

using namespace tyind;

namespace {

QZ qz(std::int64_t n, std::int64_t d) { return QZ::of(n, d); }

DiscForm block(char tag, std::int64_t p, int r) { return block_bilinear({tag, p, r}); }

// Random gram compatible with g, non-degenerate ones only (retries inside).
DiscForm random_nondeg(std::mt19937_64& rng, const std::vector<std::int64_t>& pool, int maxrank) {
    for (;;) {
        int n = 1 + int(rng() % maxrank);
        std::vector<std::int64_t> orders;
        for (int i = 0; i < n; ++i) orders.push_back(pool[rng() % pool.size()]);
        FinAbGroup g(orders);
        QZMat m(n, std::vector<QZ>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::int64_t den = gcd64(g.factors()[i].order, g.factors()[j].order);
                m[i][j] = qz(std::int64_t(rng() % den), den);
                m[j][i] = m[i][j];
            }
        DiscForm f(g, m);
        if (is_nondegenerate(f)) return f;
    }
}

int two_cap(const FinAbGroup& g) {
    int v = 0;
    for (const auto& f : g.factors())
        if (f.p == 2) v = std::max(v, f.r);
    return v;
}

// q_k(x) = 2^{k-1} b(x,x) on the full group, for the enumeration cross-check.
QuadForm qk_form(const DiscForm& b, int k) {
    std::int64_t h = checked_pow(2, k - 1);
    int n = b.group.rank();
    std::vector<QZ> qd(n);
    QZMat m(n, std::vector<QZ>(n));
    for (int i = 0; i < n; ++i) {
        qd[i] = b.gram[i][i].scaled(h);
        for (int j = 0; j < n; ++j) m[i][j] = b.gram[i][j].scaled(2 * h);
    }
    return QuadForm(b.group, qd, m);
}

// --- exhaustive automorphism machinery for the desk-scale completeness test

using IMat64 = std::vector<std::vector<std::int64_t>>;

GroupElem column(const IMat64& u, int j) {
    GroupElem x(u.size());
    for (std::size_t a = 0; a < u.size(); ++a) x[a] = u[a][j];
    return x;
}

bool is_automorphism(const FinAbGroup& g, const IMat64& u) {
    int n = g.rank();
    // Each image must have exactly its slot's order (so the map is a
    // well-defined endomorphism and the order product is |G|)...
    for (int j = 0; j < n; ++j)
        if (element_order(g, column(u, j)) != g.factors()[j].order) return false;
    // ...and the images must generate, checked per prime as row rank.
    for (const auto& part : sylow_parts(g)) {
        int np = int(part.idx.size());
        std::vector<std::vector<std::int64_t>> rows(np, std::vector<std::int64_t>(n));
        for (int a = 0; a < np; ++a)
            for (int j = 0; j < n; ++j) rows[a][j] = mod_reduce(u[part.idx[a]][j], part.p);
        int rank = 0;
        for (int col = 0; col < n && rank < np; ++col) {
            int piv = -1;
            for (int a = rank; a < np; ++a)
                if (rows[a][col]) {
                    piv = a;
                    break;
                }
            if (piv < 0) continue;
            std::swap(rows[piv], rows[rank]);
            std::int64_t inv = inv_mod(rows[rank][col], part.p);
            for (int a = 0; a < np; ++a) {
                if (a == rank || rows[a][col] == 0) continue;
                std::int64_t c = mul_mod(rows[a][col], inv, part.p);
                for (int d = col; d < n; ++d)
                    rows[a][d] = mod_reduce(rows[a][d] - c * rows[rank][d], part.p);
            }
            ++rank;
        }
        if (rank != np) return false;
    }
    return true;
}

std::vector<IMat64> all_automorphisms(const FinAbGroup& g) {
    int n = g.rank();
    std::vector<IMat64> out;
    IMat64 u(n, std::vector<std::int64_t>(n, 0));
    auto rec = [&](auto&& self, int a, int j) -> void {
        if (j == n) {
            if (is_automorphism(g, u)) out.push_back(u);
            return;
        }
        int na = a + 1, nj = j;
        if (na == n) na = 0, ++nj;
        for (std::int64_t v = 0; v < g.factors()[a].order; ++v) {
            u[a][j] = v;
            self(self, na, nj);
        }
        u[a][j] = 0;
    };
    rec(rec, 0, 0);
    return out;
}

std::vector<std::int64_t> gram_key(const FinAbGroup& g, const QZMat& m) {
    std::vector<std::int64_t> key;
    for (int i = 0; i < g.rank(); ++i)
        for (int j = i; j < g.rank(); ++j) {
            std::int64_t den = gcd64(g.factors()[i].order, g.factors()[j].order);
            key.push_back(m[i][j].num() * (den / m[i][j].den()));
        }
    return key;
}

QZMat conjugate_gram(const DiscForm& f, const IMat64& u) {
    int n = f.group.rank();
    QZMat out(n, std::vector<QZ>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = eval_b(f, column(u, i), column(u, j));
    return out;
}

}  // namespace

TEST_CASE("reduced_group counts the Z/p^k factors") {
    FinAbGroup g({2, 4, 4, 8, 3, 9});
    CHECK(reduced_group(g, 2, 1).rank() == 1);
    CHECK(reduced_group(g, 2, 2).rank() == 2);
    CHECK(reduced_group(g, 2, 3).rank() == 1);
    CHECK(reduced_group(g, 2, 4).rank() == 0);
    CHECK(reduced_group(g, 3, 1).rank() == 1);
    CHECK(reduced_group(g, 3, 2).rank() == 1);
    CHECK(reduced_group(g, 2, 1) == FinAbGroup({2}));
    CHECK_THROWS(reduced_group(g, 2, 0));
    CHECK_THROWS(reduced_group(g, 6, 1));
}

TEST_CASE("characteristic_element: frozen cases and the defining identity") {
    CHECK(characteristic_element(block('A', 2, 1), 1).nonzero);
    CHECK_FALSE(characteristic_element(block('E', 2, 1), 1).nonzero);
    // On A_4 the order-2 element pairs integrally, but the full group does not.
    CHECK_FALSE(characteristic_element(block('A', 2, 2), 1).nonzero);
    CHECK(characteristic_element(block('A', 2, 2), 2).nonzero);

    // 2^{k-1} b(x,x) = 2^{k-1} b(x, rep) for every x in G[2^k].
    std::mt19937_64 rng(20240821);
    for (int trial = 0; trial < 30; ++trial) {
        DiscForm f = random_nondeg(rng, {2, 4, 8, 3}, 3);
        for (int k = 1; k <= 3; ++k) {
            CharacteristicElement c = characteristic_element(f, k);
            std::int64_t h = checked_pow(2, k - 1);
            std::int64_t tk = checked_pow(2, k);
            enumerate(f.group, [&](const GroupElem& x) {
                if (tk % element_order(f.group, x) != 0) return;
                CHECK(eval_b(f, x, x).scaled(h) == eval_b(f, x, c.rep).scaled(h));
            });
        }
    }

    CHECK_THROWS(characteristic_element(block('A', 2, 1), 0));
    CHECK_THROWS(characteristic_element(DiscForm(FinAbGroup({2}), {{QZ()}}), 1));
}

TEST_CASE("sigma and varsigma: frozen values") {
    CHECK(sigma(block('A', 2, 1), 1) == SigmaValue::inf());
    CHECK(varsigma(block('A', 2, 1), 1) == GaussValue::zero());
    CHECK(sigma(block('E', 2, 1), 1) == SigmaValue{false, 0});
    CHECK(varsigma(block('E', 2, 1), 1) == GaussValue(1, 0));

    CHECK(sigma(block('A', 2, 2), 1) == SigmaValue{false, 1});
    CHECK(sigma(block('A', 2, 2), 2) == SigmaValue::inf());
    CHECK(sigma(block('B', 2, 2), 1) == SigmaValue{false, 7});
    CHECK(sigma(block('C', 2, 3), 1) == SigmaValue{false, 5});

    // Trivial 2-part: sigma_k = 0 for every k.
    CHECK(sigma(DiscForm(FinAbGroup{}, {}), 1) == SigmaValue{false, 0});
    CHECK(sigma(block('A', 3, 1), 1) == SigmaValue{false, 0});
    CHECK(sigma(block('A', 3, 1), 5) == SigmaValue{false, 0});

    // The odd part never contributes.
    DiscForm mixed = direct_sum(block('A', 3, 1), block('A', 2, 1));
    CHECK(sigma(mixed, 1) == sigma(block('A', 2, 1), 1));
    DiscForm mixed2 = direct_sum(block('B', 3, 2), block('C', 2, 2));
    CHECK(sigma(mixed2, 1) == sigma(block('C', 2, 2), 1));

    // Far above the exponent the form q_k dies, even where sigma_1 was infinite.
    CHECK(sigma(block('A', 2, 1), 9) == SigmaValue{false, 0});
}

TEST_CASE("sigma vanishes above the exponent valuation") {
    std::mt19937_64 rng(20240822);
    for (int trial = 0; trial < 20; ++trial) {
        DiscForm f = random_nondeg(rng, {2, 4, 8, 3}, 3);
        int cap = two_cap(f.group);
        CHECK(sigma(f, cap + 1) == SigmaValue{false, 0});
        CHECK(sigma(f, cap + 7) == SigmaValue{false, 0});
    }
}

TEST_CASE("varsigma against the enumeration oracle") {
    std::mt19937_64 rng(20240823);
    for (int trial = 0; trial < 40; ++trial) {
        DiscForm f = random_nondeg(rng, {2, 4, 8}, 3);
        for (int k = 1; k <= two_cap(f.group); ++k) {
            GaussValue v = varsigma(f, k);
            std::complex<double> lhs = theta_bruteforce(qk_form(f, k));
            double tor = std::sqrt(double(torsion_order(f.group, checked_pow(2, k))));
            std::complex<double> rhs = v.to_complex();
            CHECK(std::abs(lhs - tor * rhs) < 1e-9);
        }
    }
}

TEST_CASE("varsigma vanishes exactly when the characteristic element is nonzero") {
    std::mt19937_64 rng(20240824);
    int vanished = 0;
    for (int trial = 0; trial < 60; ++trial) {
        DiscForm f = random_nondeg(rng, {2, 4, 8, 3, 5}, 3);
        for (int k = 1; k <= two_cap(f.group) + 1; ++k) {
            bool zero = varsigma(f, k).is_zero();
            CHECK(zero == characteristic_element(f, k).nonzero);
            if (zero) ++vanished;
        }
    }
    CHECK(vanished > 0);
}

TEST_CASE("varsigma is a semigroup homomorphism") {
    std::mt19937_64 rng(20240825);
    for (int trial = 0; trial < 40; ++trial) {
        DiscForm f1 = random_nondeg(rng, {2, 4, 8, 3}, 2);
        DiscForm f2 = random_nondeg(rng, {2, 4, 16}, 2);
        DiscForm s = direct_sum(f1, f2);
        for (int k = 1; k <= 4; ++k) CHECK(varsigma(s, k) == varsigma(f1, k) * varsigma(f2, k));
    }
}

TEST_CASE("isometry_test on named pairs") {
    CHECK_FALSE(isometry_test(block('A', 3, 1), block('B', 3, 1)));
    CHECK(isometry_test(direct_sum(block('A', 3, 1), block('A', 3, 1)),
                        direct_sum(block('B', 3, 1), block('B', 3, 1))));
    // A_2 and B_2 differ only as quadratic refinements: +-1/2 coincide mod 1.
    CHECK(isometry_test(block('A', 2, 1), block('B', 2, 1)));
    CHECK_FALSE(isometry_test(block('A', 2, 2), block('B', 2, 2)));

    // E_2 and F_2 coincide as bilinear forms; E_4 and F_4 do not.
    CHECK(isometry_test(block('E', 2, 1), block('F', 2, 1)));
    CHECK_FALSE(isometry_test(block('E', 2, 2), block('F', 2, 2)));

    // Same order, different groups.
    DiscForm g1 = direct_sum(direct_sum(block('A', 2, 1), block('A', 2, 1)),
                             direct_sum(direct_sum(block('A', 2, 1), block('A', 2, 1)),
                                        block('A', 2, 2)));
    DiscForm g2 = direct_sum(direct_sum(block('A', 2, 1), block('A', 2, 1)),
                             direct_sum(block('A', 2, 2), block('A', 2, 2)));
    CHECK_FALSE(isometry_test(g1, g2));

    CHECK_THROWS(isometry_test(DiscForm(FinAbGroup({2}), {{QZ()}}), block('A', 2, 1)));
}

TEST_CASE("isometry_test is complete on 2-groups of order up to 16") {
    std::vector<std::vector<std::int64_t>> groups{{2},       {4},       {2, 2},       {8},
                                                  {4, 2},    {2, 2, 2}, {16},         {8, 2},
                                                  {4, 4},    {4, 2, 2}, {2, 2, 2, 2}};
    for (const auto& orders : groups) {
        FinAbGroup g(orders);
        int n = g.rank();
        std::vector<IMat64> aut = all_automorphisms(g);

        // Every symmetric gram over the allowed denominators.
        std::vector<QZMat> grams;
        std::vector<std::pair<int, int>> slots;
        std::vector<std::int64_t> dens;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                slots.emplace_back(i, j);
                dens.push_back(gcd64(g.factors()[i].order, g.factors()[j].order));
            }
        std::vector<std::int64_t> nums(slots.size(), 0);
        auto emit = [&](auto&& self, std::size_t s) -> void {
            if (s == slots.size()) {
                QZMat m(n, std::vector<QZ>(n));
                for (std::size_t t = 0; t < slots.size(); ++t) {
                    m[slots[t].first][slots[t].second] = qz(nums[t], dens[t]);
                    m[slots[t].second][slots[t].first] = m[slots[t].first][slots[t].second];
                }
                grams.push_back(std::move(m));
                return;
            }
            for (std::int64_t v = 0; v < dens[s]; ++v) {
                nums[s] = v;
                self(self, s + 1);
            }
        };
        emit(emit, 0);

        // Exact isometry classes: orbits under the full automorphism group.
        std::map<std::vector<std::int64_t>, int> orbit_of;
        std::vector<DiscForm> reps;
        std::vector<std::vector<DiscForm>> samples;
        for (const auto& m : grams) {
            DiscForm f(g, m);
            if (!is_nondegenerate(f)) continue;
            auto key = gram_key(g, m);
            if (orbit_of.count(key)) {
                if (int(samples[orbit_of[key]].size()) < 3) samples[orbit_of[key]].push_back(f);
                continue;
            }
            int id = int(reps.size());
            for (const auto& u : aut) orbit_of[gram_key(g, conjugate_gram(f, u))] = id;
            REQUIRE(orbit_of.count(key));  // identity is an automorphism
            reps.push_back(f);
            samples.emplace_back();
        }

        INFO(g.str(), ": ", reps.size(), " classes");
        for (std::size_t i = 0; i < reps.size(); ++i) {
            for (std::size_t j = 0; j < reps.size(); ++j)
                CHECK(isometry_test(reps[i], reps[j]) == (i == j));
            for (const auto& s : samples[i]) CHECK(isometry_test(reps[i], s));
        }
    }
}

TEST_CASE("invariants survive a valid change of generators") {
    std::mt19937_64 rng(20240826);
    for (int trial = 0; trial < 25; ++trial) {
        DiscForm f = random_nondeg(rng, {2, 4, 8, 3}, 3);
        int n = f.group.rank();
        IMat gens(n, std::vector<std::int64_t>(n, 0));
        for (int i = 0; i < n; ++i) gens[i][i] = 1;
        QZMat m = f.gram;
        auto col_ord = [&](int j) {
            GroupElem v(n);
            for (int a = 0; a < n; ++a) v[a] = gens[a][j];
            return element_order(f.group, v);
        };
        for (int step = 0; step < 25; ++step) {
            RowColOp op;
            int kind = int(rng() % 3);
            op.i = int(rng() % n);
            op.j = int(rng() % n);
            if (kind == 0) {
                if (col_ord(op.i) != col_ord(op.j)) continue;
                op.kind = RowColOp::Kind::Flip;
            } else if (kind == 1) {
                if (op.i == op.j) continue;
                op.kind = RowColOp::Kind::Add;
                op.r = std::int64_t(rng() % 8);
            } else {
                op.kind = RowColOp::Kind::Scale;
                op.r = std::int64_t(1 + rng() % (f.group.exponent() - 1));
            }
            if (!validity_check(f.group, gens, op)) continue;
            for (int a = 0; a < n; ++a) {
                std::int64_t oa = f.group.factors()[a].order;
                switch (op.kind) {
                    case RowColOp::Kind::Flip: std::swap(gens[a][op.i], gens[a][op.j]); break;
                    case RowColOp::Kind::Add:
                        gens[a][op.i] = mod_reduce(
                            gens[a][op.i] + mul_mod(mod_reduce(op.r, oa), gens[a][op.j], oa), oa);
                        break;
                    case RowColOp::Kind::Scale:
                        gens[a][op.i] = mul_mod(gens[a][op.i], mod_reduce(op.r, oa), oa);
                        break;
                }
            }
            m = apply_rowcol(m, op);
        }
        DiscForm shuffled(f.group, m);
        CHECK(isometry_test(f, shuffled));
        for (int k = 1; k <= two_cap(f.group); ++k)
            CHECK(varsigma(f, k) == varsigma(shuffled, k));
    }
}
