#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <tuple>

#include "doctest.h"
#include "tyind/decompose.hpp"
#include "tyind/numtheory.hpp"

using namespace tyind;

namespace {

QZ qz(std::int64_t n, std::int64_t d) { return QZ::of(n, d); }

DiscForm rank1(std::int64_t order, std::int64_t num, std::int64_t den) {
    return DiscForm(FinAbGroup({order}), {{qz(num, den)}});
}

GroupElem column(const IMat& m, int j) {
    GroupElem x(m.size());
    for (int a = 0; a < int(m.size()); ++a) x[a] = m[a][j];
    return x;
}

QZMat expected_gram(const std::vector<IrreducibleBlock>& blocks, int n) {
    QZMat g(n, std::vector<QZ>(n));
    int off = 0;
    for (const auto& b : blocks) {
        DiscForm t = block_bilinear(b);
        int k = block_rank(b);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) g[off + i][off + j] = t.gram[i][j];
        off += k;
    }
    REQUIRE(off == n);
    return g;
}

std::vector<QZ> expected_qdiag(const std::vector<IrreducibleBlock>& blocks, int n) {
    std::vector<QZ> q(n);
    int off = 0;
    for (const auto& b : blocks) {
        QuadForm t = block_quadratic(b);
        for (int i = 0; i < block_rank(b); ++i) q[off + i] = t.qdiag[i];
        off += block_rank(b);
    }
    return q;
}

// The decomposition's own claim, checked through the public evaluators: the
// new generators' pairings (and q-values) must be the table data exactly.
void check_decomposition_exact(const DiscForm& f, const Decomposition& d) {
    int n = f.group.rank();
    QZMat want = expected_gram(d.blocks, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(eval_b(f, column(d.basis_change, i), column(d.basis_change, j)) == want[i][j]);
}

void check_decomposition_exact(const QuadForm& f, const Decomposition& d) {
    int n = f.group.rank();
    QZMat want = expected_gram(d.blocks, n);
    std::vector<QZ> wq = expected_qdiag(d.blocks, n);
    for (int i = 0; i < n; ++i) {
        CHECK(eval_q(f, column(d.basis_change, i)) == wq[i]);
        for (int j = 0; j < n; ++j)
            CHECK(eval_b(f, column(d.basis_change, i), column(d.basis_change, j)) == want[i][j]);
    }
}

void apply_op_to_gens(const FinAbGroup& g, IMat& gens, const RowColOp& op) {
    for (int a = 0; a < g.rank(); ++a) {
        std::int64_t oa = g.factors()[a].order;
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
}

IMat identity_gens(int n) {
    IMat m(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

// Replay the provenance: every op must pass validity_check against the gens it
// was applied to, and replaying on the gram must land on the table data.
void check_provenance(const FinAbGroup& g, QZMat gram, const Decomposition& d) {
    IMat gens = identity_gens(g.rank());
    for (const auto& op : d.ops) {
        CHECK(validity_check(g, gens, op));
        apply_op_to_gens(g, gens, op);
        gram = apply_rowcol(gram, op);
    }
    CHECK(gens == d.basis_change);
    QZMat want = expected_gram(d.blocks, g.rank());
    CHECK(gram == want);
}

std::vector<std::tuple<std::int64_t, int, char>> block_key(const Decomposition& d) {
    std::vector<std::tuple<std::int64_t, int, char>> k;
    for (const auto& b : d.blocks) k.emplace_back(b.p, b.r, b.tag);
    std::sort(k.begin(), k.end());
    return k;
}

}  // namespace

TEST_CASE("apply_rowcol matches hand-computed transforms") {
    QZMat a{{qz(1, 4), QZ()}, {QZ(), qz(1, 2)}};
    QZMat added = apply_rowcol(a, {RowColOp::Kind::Add, 0, 1, 1});
    CHECK(added[0][0] == qz(3, 4));
    CHECK(added[0][1] == qz(1, 2));
    CHECK(added[1][0] == qz(1, 2));
    CHECK(added[1][1] == qz(1, 2));

    QZMat scaled = apply_rowcol(a, {RowColOp::Kind::Scale, 0, 0, 3});
    CHECK(scaled[0][0] == qz(9, 4));  // 1/4 again; QZ::of reduces
    CHECK(scaled[0][0] == qz(1, 4));
    CHECK(scaled[1][1] == qz(1, 2));

    QZMat flipped = apply_rowcol(a, {RowColOp::Kind::Flip, 0, 1, 1});
    CHECK(flipped[0][0] == qz(1, 2));
    CHECK(flipped[1][1] == qz(1, 4));

    CHECK_THROWS(apply_rowcol(a, {RowColOp::Kind::Add, 0, 2, 1}));
    CHECK_THROWS(apply_rowcol(a, {RowColOp::Kind::Add, 0, 0, 1}));
}

TEST_CASE("validity_check accepts order-preserving ops and rejects the rest") {
    FinAbGroup g({4, 2});
    IMat gens = identity_gens(2);
    // f_0 += f_1 keeps ord = 4; f_1 += f_0 would raise ord(f_1) from 2 to 4.
    CHECK(validity_check(g, gens, {RowColOp::Kind::Add, 0, 1, 1}));
    CHECK_FALSE(validity_check(g, gens, {RowColOp::Kind::Add, 1, 0, 1}));
    CHECK(validity_check(g, gens, {RowColOp::Kind::Add, 1, 0, 2}));
    CHECK(validity_check(g, gens, {RowColOp::Kind::Flip, 0, 1, 1}));
    CHECK(validity_check(g, gens, {RowColOp::Kind::Scale, 0, 0, 3}));
    CHECK_FALSE(validity_check(g, gens, {RowColOp::Kind::Scale, 0, 0, 2}));
    CHECK_THROWS(validity_check(g, gens, {RowColOp::Kind::Scale, 5, 0, 1}));

    // A scale coprime to this factor's order but not to |G| is still valid.
    FinAbGroup mixed({4, 3});
    CHECK(validity_check(mixed, identity_gens(2), {RowColOp::Kind::Scale, 0, 0, 3}));
    CHECK_FALSE(validity_check(mixed, identity_gens(2), {RowColOp::Kind::Scale, 1, 0, 3}));
}

TEST_CASE("block tables match their defining data") {
    DiscForm a4 = block_bilinear({'A', 2, 2});
    CHECK(a4.gram[0][0] == qz(1, 4));
    CHECK(block_name({'A', 2, 2}) == "A4");
    CHECK(block_name({'B', 3, 2}) == "B9");
    CHECK(block_name({'E', 2, 1}) == "E2");

    QuadForm d8 = block_quadratic({'D', 2, 3});
    CHECK(d8.qdiag[0] == qz(-5, 16));
    CHECK(d8.bgram[0][0] == qz(-5, 8));

    QuadForm b9 = block_quadratic({'B', 3, 2});
    CHECK(b9.bgram[0][0] == qz(2, 9));          // 2 is the smallest non-residue mod 3
    CHECK(b9.qdiag[0].scaled(2) == qz(2, 9));   // q is the half of b

    QuadForm f4 = block_quadratic({'F', 2, 2});
    CHECK(f4.qdiag[0] == qz(1, 4));
    CHECK(f4.bgram[0][1] == qz(1, 4));
    CHECK(f4.bgram[0][0] == qz(1, 2));

    // The mod-4 coincidences: C_2 stores the same form as A_2, D_2 as B_2.
    CHECK(block_quadratic({'C', 2, 1}).qdiag[0] == block_quadratic({'A', 2, 1}).qdiag[0]);
    CHECK(block_quadratic({'D', 2, 1}).qdiag[0] == block_quadratic({'B', 2, 1}).qdiag[0]);

    CHECK_THROWS(block_bilinear({'E', 3, 1}));
    CHECK_THROWS(block_bilinear({'Z', 2, 1}));
}

TEST_CASE("hensel_lift solves the coefficient congruences") {
    // All-ones targets: the hexagonal seed already works.
    IMat s = hensel_lift(HenselSystem::Hexagonal, 1, 1, 1, 5);
    CHECK(s == IMat{{1, 0}, {0, 1}});
    // Hyperbolic standard triple: the seed matrix is exact too.
    IMat h = hensel_lift(HenselSystem::Hyperbolic, 0, 1, 0, 4);
    CHECK(h == IMat{{0, 1}, {1, 0}});

    auto verify = [](HenselSystem sys, std::int64_t a, std::int64_t b, std::int64_t c, int n) {
        IMat m = hensel_lift(sys, a, b, c, n);
        std::int64_t mod = checked_pow(2, n);
        std::int64_t s11 = m[0][0], s12 = m[0][1], s21 = m[1][0], s22 = m[1][1];
        std::int64_t va, vb, vc;
        if (sys == HenselSystem::Hexagonal) {
            va = mod_reduce(s11 * s11 + s11 * s12 + s12 * s12, mod);
            vb = mod_reduce(2 * s11 * s21 + s11 * s22 + s21 * s12 + 2 * s12 * s22, mod);
            vc = mod_reduce(s21 * s21 + s21 * s22 + s22 * s22, mod);
        } else {
            va = mod_reduce(s11 * s12, mod);
            vb = mod_reduce(s11 * s22 + s21 * s12, mod);
            vc = mod_reduce(s21 * s22, mod);
        }
        CHECK(va == mod_reduce(a, mod));
        CHECK(vb == mod_reduce(b, mod));
        CHECK(vc == mod_reduce(c, mod));
    };
    verify(HenselSystem::Hexagonal, 3, 5, 1, 3);

    // Exhaustive at modulus 16: every admissible triple lifts and verifies.
    for (std::int64_t a = 0; a < 16; ++a)
        for (std::int64_t b = 1; b < 16; b += 2)
            for (std::int64_t c = 0; c < 16; ++c) {
                if (a % 2 != 0 && c % 2 != 0) verify(HenselSystem::Hexagonal, a, b, c, 4);
                if (a % 2 == 0 || c % 2 == 0) verify(HenselSystem::Hyperbolic, a, b, c, 4);
            }

    CHECK_THROWS(hensel_lift(HenselSystem::Hexagonal, 2, 1, 1, 3));
    CHECK_THROWS(hensel_lift(HenselSystem::Hyperbolic, 1, 1, 1, 3));
    CHECK_THROWS(hensel_lift(HenselSystem::Hyperbolic, 0, 2, 0, 3));
}

TEST_CASE("diagonalize_odd produces unit-class diagonals") {
    // Hyperbolic-looking gram over Z/3: splits into residue and non-residue classes.
    QZMat a{{QZ(), qz(1, 3)}, {qz(1, 3), QZ()}};
    auto [s, diag] = diagonalize_odd(a, 3);
    std::vector<QZ> got = diag;
    std::sort(got.begin(), got.end(), [](const QZ& x, const QZ& y) {
        return std::pair(x.den(), x.num()) < std::pair(y.den(), y.num());
    });
    CHECK(got[0] == qz(1, 3));
    CHECK(got[1] == qz(2, 3));

    // S^t A S must equal the claimed diagonal exactly.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            QZ acc;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) acc = acc + a[k][l].scaled(s[k][i]).scaled(s[l][j]);
            CHECK(acc == (i == j ? diag[i] : QZ()));
        }

    // Degenerate rows are allowed and come back as zeros.
    QZMat z{{QZ(), QZ()}, {QZ(), qz(1, 9)}};
    auto [s2, diag2] = diagonalize_odd(z, 3);
    CHECK(diag2[0] == qz(1, 9));
    CHECK(diag2[1] == QZ());

    CHECK_THROWS(diagonalize_odd(a, 2));
    CHECK_THROWS(diagonalize_odd(a, 9));
}

TEST_CASE("diagonalize_odd on random matrices") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 60; ++trial) {
        std::int64_t p = std::array<std::int64_t, 3>{3, 5, 7}[rng() % 3];
        int n = 1 + int(rng() % 4);
        std::vector<int> rs(n);
        for (auto& r : rs) r = 1 + int(rng() % 3);
        QZMat a(n, std::vector<QZ>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::int64_t den = checked_pow(p, std::min(rs[i], rs[j]));
                a[i][j] = qz(std::int64_t(rng() % 2 ? rng() % den : 0), den);
                a[j][i] = a[i][j];
            }
        auto [s, diag] = diagonalize_odd(a, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                QZ acc;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        acc = acc + a[k][l].scaled(s[k][i]).scaled(s[l][j]);
                CHECK(acc == (i == j ? diag[i] : QZ()));
            }
        for (const auto& d : diag)
            if (!d.is_zero()) {
                std::int64_t eps = d.num();
                CHECK((eps == 1 || eps == quadratic_nonresidue(p)));
            }
    }
}

TEST_CASE("block_diagonalize_two splits into normalized blocks") {
    std::mt19937_64 rng(20240812);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + int(rng() % 5);
        std::vector<int> rs(n);
        for (auto& r : rs) r = 1 + int(rng() % 3);
        QZMat a(n, std::vector<QZ>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::int64_t den = checked_pow(2, std::min(rs[i], rs[j]));
                a[i][j] = qz(std::int64_t(rng() % 2 ? rng() % den : 0), den);
                a[j][i] = a[i][j];
            }
        TwoAdicBlocks out = block_diagonalize_two(a);
        // S^t A S = result, exactly.
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                QZ acc;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        acc = acc + a[k][l].scaled(out.s[k][i]).scaled(out.s[l][j]);
                CHECK(acc == out.gram[i][j]);
            }
        int covered = 0;
        for (auto [pos, size] : out.blocks) {
            CHECK(pos == covered);
            covered += size;
            if (size == 1) {
                const QZ& d = out.gram[pos][pos];
                if (!d.is_zero()) {
                    std::int64_t den = d.den();
                    bool named = false;
                    for (std::int64_t u : {std::int64_t(1), std::int64_t(-1), std::int64_t(5),
                                           std::int64_t(-5)})
                        named = named || d == QZ::of(u, den);
                    CHECK(named);
                }
            } else {
                // Raw 2x2: odd off-diagonal at the finest scale of the block.
                const QZ& h = out.gram[pos][pos + 1];
                CHECK(h.num() % 2 == 1);
                CHECK(h.den() > out.gram[pos][pos].den());
                CHECK(h.den() > out.gram[pos + 1][pos + 1].den());
            }
        }
        CHECK(covered == n);
        // Off-block entries vanish.
        int off = 0;
        for (auto [pos, size] : out.blocks) {
            for (int i = pos; i < pos + size; ++i)
                for (int j = 0; j < n; ++j)
                    if (j < pos || j >= pos + size) CHECK(out.gram[i][j].is_zero());
            off += size;
        }
    }
}

TEST_CASE("normalize_rank2 classifies and transforms indecomposable pairs") {
    auto run = [](QZMat in, char want_tag, int want_r) {
        Rank2Result res = normalize_rank2(in);
        CHECK(res.block.tag == want_tag);
        CHECK(res.block.r == want_r);
        DiscForm table = block_bilinear(res.block);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                QZ acc;
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        acc = acc + in[k][l].scaled(res.witness[k][i]).scaled(res.witness[l][j]);
                CHECK(acc == table.gram[i][j]);
            }
    };
    run({{QZ(), qz(1, 4)}, {qz(1, 4), QZ()}}, 'E', 2);
    run({{qz(1, 2), qz(1, 4)}, {qz(1, 4), qz(1, 2)}}, 'F', 2);
    run({{qz(1, 2), qz(3, 4)}, {qz(3, 4), qz(1, 2)}}, 'F', 2);
    run({{qz(1, 2), qz(1, 4)}, {qz(1, 4), QZ()}}, 'E', 2);
    run({{qz(3, 4), qz(5, 8)}, {qz(5, 8), qz(1, 2)}}, 'E', 3);
    // Scale 1/2: hexagonal and hyperbolic coincide; the name is E.
    run({{QZ(), qz(1, 2)}, {qz(1, 2), QZ()}}, 'E', 1);

    CHECK_THROWS(normalize_rank2({{qz(1, 4), qz(1, 4)}, {qz(1, 4), QZ()}}));
    CHECK_THROWS(normalize_rank2({{qz(1, 4)}}));
}

TEST_CASE("wall_decompose: single-generator forms land on their table entry") {
    auto tags = [](const DiscForm& f) {
        Decomposition d = wall_decompose(f);
        std::vector<std::string> names;
        for (const auto& b : d.blocks) names.push_back(block_name(b));
        return names;
    };
    CHECK(tags(rank1(4, 1, 4)) == std::vector<std::string>{"A4"});
    CHECK(tags(rank1(8, 3, 8)) == std::vector<std::string>{"D8"});
    CHECK(tags(rank1(8, 5, 8)) == std::vector<std::string>{"C8"});
    CHECK(tags(rank1(8, 7, 8)) == std::vector<std::string>{"B8"});
    CHECK(tags(rank1(2, 1, 2)) == std::vector<std::string>{"A2"});
    CHECK(tags(rank1(4, 3, 4)) == std::vector<std::string>{"B4"});
    CHECK(tags(rank1(3, 1, 3)) == std::vector<std::string>{"A3"});
    CHECK(tags(rank1(3, 2, 3)) == std::vector<std::string>{"B3"});
    CHECK(tags(rank1(9, 5, 9)) == std::vector<std::string>{"B9"});
    CHECK(tags(rank1(5, 1, 5)) == std::vector<std::string>{"A5"});
    CHECK(tags(rank1(5, 2, 5)) == std::vector<std::string>{"B5"});

    // Degenerate forms are rejected.
    CHECK_THROWS(wall_decompose(rank1(4, 1, 2)));
    CHECK_THROWS(wall_decompose(DiscForm(FinAbGroup({2}), {{QZ()}})));
}

TEST_CASE("wall_decompose: hyperbolic odd gram splits into opposite classes") {
    DiscForm f(FinAbGroup({3, 3}), {{QZ(), qz(1, 3)}, {qz(1, 3), QZ()}});
    Decomposition d = wall_decompose(f);
    auto key = block_key(d);
    CHECK(key == std::vector<std::tuple<std::int64_t, int, char>>{{3, 1, 'A'}, {3, 1, 'B'}});
    check_decomposition_exact(f, d);
    check_provenance(f.group, f.gram, d);

    // Same invariants as the already-diagonal representative.
    DiscForm diag(FinAbGroup({3, 3}), {{qz(1, 3), QZ()}, {QZ(), qz(2, 3)}});
    CHECK(block_key(wall_decompose(diag)) == key);
}

TEST_CASE("wall_decompose: two-adic pair blocks") {
    DiscForm e4(FinAbGroup({4, 4}), {{QZ(), qz(1, 4)}, {qz(1, 4), QZ()}});
    Decomposition de = wall_decompose(e4);
    CHECK(block_key(de) == std::vector<std::tuple<std::int64_t, int, char>>{{2, 2, 'E'}});
    check_decomposition_exact(e4, de);
    check_provenance(e4.group, e4.gram, de);

    DiscForm f4(FinAbGroup({4, 4}), {{qz(1, 2), qz(1, 4)}, {qz(1, 4), qz(1, 2)}});
    Decomposition df = wall_decompose(f4);
    CHECK(block_key(df) == std::vector<std::tuple<std::int64_t, int, char>>{{2, 2, 'F'}});

    DiscForm e2(FinAbGroup({2, 2}), {{QZ(), qz(1, 2)}, {qz(1, 2), QZ()}});
    CHECK(block_key(wall_decompose(e2)) ==
          std::vector<std::tuple<std::int64_t, int, char>>{{2, 1, 'E'}});
}

TEST_CASE("wall_decompose: the rank-four two-group example") {
    FinAbGroup g({4, 4, 2, 2});
    QZMat m(4, std::vector<QZ>(4));
    m[0][0] = qz(1, 4);
    m[1][1] = qz(1, 4);
    m[2][2] = qz(1, 2);
    m[3][3] = qz(1, 2);
    DiscForm f(g, m);
    Decomposition d = wall_decompose(f);
    std::vector<std::string> names;
    for (const auto& b : d.blocks) names.push_back(block_name(b));
    CHECK(names == std::vector<std::string>{"A4", "A4", "A2", "A2"});
    CHECK(d.ops.empty());
}

TEST_CASE("wall_decompose: quadratic forms pick their refinement class") {
    QuadForm a4(FinAbGroup({4}), {qz(1, 8)}, {{qz(1, 4)}});
    Decomposition d = wall_decompose(a4);
    CHECK(block_name(d.blocks[0]) == "A4");

    QuadForm c8(FinAbGroup({8}), {qz(5, 16)}, {{qz(5, 8)}});
    CHECK(block_name(wall_decompose(c8).blocks[0]) == "C8");

    // Same bilinear data, different quadratic class: E_2 against F_2.
    QuadForm e2 = block_quadratic({'E', 2, 1});
    QuadForm f2 = block_quadratic({'F', 2, 1});
    CHECK(block_name(wall_decompose(e2).blocks[0]) == "E2");
    CHECK(block_name(wall_decompose(f2).blocks[0]) == "F2");
    CHECK(e2.bgram == f2.bgram);  // only q tells them apart

    // (I + J) tensor A_2 carries the hexagonal form on (Z/2)^2.
    QuadForm t3 = tensor_matrix({{2, 1}, {1, 2}}, block_quadratic({'A', 2, 1}));
    Decomposition dt = wall_decompose(t3);
    CHECK(block_key(dt) == std::vector<std::tuple<std::int64_t, int, char>>{{2, 1, 'F'}});
    check_decomposition_exact(t3, dt);

    // q = x^2/2 on Z/2 has identically zero boundary: degenerate, rejected.
    CHECK_THROWS(wall_decompose(QuadForm(FinAbGroup({2}), {qz(1, 2)}, {{QZ()}})));
}

TEST_CASE("wall_decompose on random bilinear forms") {
    std::mt19937_64 rng(20240813);
    int accepted = 0;
    for (int trial = 0; trial < 200 && accepted < 40; ++trial) {
        std::vector<std::int64_t> orders;
        int n = 1 + int(rng() % 4);
        for (int i = 0; i < n; ++i)
            orders.push_back(std::array<std::int64_t, 6>{2, 4, 8, 3, 9, 5}[rng() % 6]);
        FinAbGroup g(orders);
        QZMat m(n, std::vector<QZ>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::int64_t den = gcd64(g.factors()[i].order, g.factors()[j].order);
                m[i][j] = qz(std::int64_t(rng() % den), den);
                m[j][i] = m[i][j];
            }
        DiscForm f(g, m);
        if (!is_nondegenerate(f)) continue;
        ++accepted;
        Decomposition d = wall_decompose(f);
        check_decomposition_exact(f, d);
        check_provenance(g, m, d);
        std::int64_t covered = 1;
        for (const auto& b : d.blocks)
            covered = checked_mul(covered, checked_pow(checked_pow(b.p, b.r), block_rank(b)));
        CHECK(covered == g.order());
    }
    CHECK(accepted == 40);
}

TEST_CASE("wall_decompose on random quadratic forms") {
    std::mt19937_64 rng(20240814);
    int accepted = 0;
    for (int trial = 0; trial < 300 && accepted < 40; ++trial) {
        std::vector<std::int64_t> orders;
        int n = 1 + int(rng() % 3);
        for (int i = 0; i < n; ++i)
            orders.push_back(std::array<std::int64_t, 5>{2, 4, 8, 3, 9}[rng() % 5]);
        FinAbGroup g(orders);
        QZMat m(n, std::vector<QZ>(n));
        std::vector<QZ> q(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::int64_t den = gcd64(g.factors()[i].order, g.factors()[j].order);
                m[i][j] = qz(std::int64_t(rng() % den), den);
                m[j][i] = m[i][j];
            }
        for (int i = 0; i < n; ++i) {
            // q(e_i) is half of b(e_i, e_i); odd orders force the half, even orders admit both.
            if (g.factors()[i].order % 2 == 1) {
                std::int64_t d = m[i][i].den();
                q[i] = qz(mul_mod(m[i][i].num(), (d + 1) / 2, d), d);
            } else {
                q[i] = qz(m[i][i].num(), 2 * m[i][i].den());
                if (rng() % 2) q[i] = q[i] + qz(1, 2);
            }
        }
        QuadForm f(g, q, m);
        if (!is_nondegenerate(f)) continue;
        ++accepted;
        Decomposition d = wall_decompose(f);
        check_decomposition_exact(f, d);
        std::int64_t covered = 1;
        for (const auto& b : d.blocks)
            covered = checked_mul(covered, checked_pow(checked_pow(b.p, b.r), block_rank(b)));
        CHECK(covered == g.order());
    }
    CHECK(accepted == 40);
}

TEST_CASE("wall_decompose invariants survive a valid change of generators") {
    std::mt19937_64 rng(20240815);
    std::vector<IrreducibleBlock> catalog{{'A', 2, 1}, {'B', 2, 2}, {'C', 2, 3}, {'E', 2, 1},
                                          {'F', 2, 2}, {'A', 3, 1}, {'B', 3, 2}, {'A', 5, 1}};
    for (int trial = 0; trial < 25; ++trial) {
        int picks = 1 + int(rng() % 3);
        std::vector<IrreducibleBlock> chosen;
        DiscForm f = block_bilinear(catalog[rng() % catalog.size()]);
        chosen.push_back(catalog[rng() % catalog.size()]);
        f = block_bilinear(chosen.back());
        for (int i = 1; i < picks; ++i) {
            chosen.push_back(catalog[rng() % catalog.size()]);
            f = direct_sum(f, block_bilinear(chosen.back()));
        }
        Decomposition base = wall_decompose(f);

        // Scramble with random valid generator changes.  Cross-order flips are
        // valid but leave the gram unrepresentable against the group's fixed
        // factor order, so restrict flips to equal-order columns.
        int n = f.group.rank();
        IMat gens = identity_gens(n);
        QZMat m = f.gram;
        auto col_ord = [&](int k) {
            GroupElem v(n);
            for (int a = 0; a < n; ++a) v[a] = gens[a][k];
            return element_order(f.group, v);
        };
        for (int step = 0; step < 30; ++step) {
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
            apply_op_to_gens(f.group, gens, op);
            m = apply_rowcol(m, op);
        }
        DiscForm shuffled(f.group, m);
        Decomposition again = wall_decompose(shuffled);
        check_decomposition_exact(shuffled, again);

        // Invariants: same (p, r, rank) census, same odd-part unit classes.
        auto census = [](const Decomposition& d) {
            std::vector<std::tuple<std::int64_t, int, int>> c;
            for (const auto& b : d.blocks) c.emplace_back(b.p, b.r, block_rank(b));
            std::sort(c.begin(), c.end());
            return c;
        };
        CHECK(census(base) == census(again));
        auto odd_class = [](const Decomposition& d) {
            std::vector<std::tuple<std::int64_t, int, int>> c;  // (p, r, #B mod 2)
            for (const auto& b : d.blocks)
                if (b.p != 2) c.emplace_back(b.p, b.r, b.tag == 'B' ? 1 : 0);
            std::sort(c.begin(), c.end());
            // fold parity per (p, r)
            std::vector<std::tuple<std::int64_t, int, int>> folded;
            for (const auto& [p, r, s] : c) {
                if (!folded.empty() && std::get<0>(folded.back()) == p &&
                    std::get<1>(folded.back()) == r)
                    std::get<2>(folded.back()) ^= s;
                else
                    folded.emplace_back(p, r, s);
            }
            return folded;
        };
        CHECK(odd_class(base) == odd_class(again));
    }
}

TEST_CASE("lift_quadratic produces a refinement with the exact boundary") {
    DiscForm a4 = block_bilinear({'A', 2, 2});
    QuadForm q = lift_quadratic(a4);
    CHECK(q.bgram == a4.gram);
    CHECK(q.qdiag[0] == qz(1, 8));

    DiscForm e2 = block_bilinear({'E', 2, 1});
    QuadForm qe = lift_quadratic(e2);
    CHECK(qe.bgram == e2.gram);
    // dq(x, y) must reproduce b on every pair of elements.
    enumerate(qe.group, [&](const GroupElem& x) {
        enumerate(qe.group, [&](const GroupElem& y) {
            GroupElem xy = add_elem(qe.group, x, y);
            QZ dq = eval_q(qe, xy) - eval_q(qe, x) - eval_q(qe, y);
            CHECK(dq == eval_b(e2, x, y));
        });
    });

    DiscForm odd(FinAbGroup({3, 3}), {{QZ(), qz(1, 3)}, {qz(1, 3), QZ()}});
    QuadForm qo = lift_quadratic(odd);
    enumerate(qo.group, [&](const GroupElem& x) {
        enumerate(qo.group, [&](const GroupElem& y) {
            GroupElem xy = add_elem(qo.group, x, y);
            QZ dq = eval_q(qo, xy) - eval_q(qo, x) - eval_q(qo, y);
            CHECK(dq == eval_b(odd, x, y));
        });
    });

    CHECK_THROWS(lift_quadratic(rank1(4, 1, 2)));
}
