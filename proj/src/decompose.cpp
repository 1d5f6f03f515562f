#include "tyind/decompose.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "localsnf.hpp"
#include "tyind/numtheory.hpp"

namespace tyind {

namespace {

/// Denominator exponent of a p-power-denominator entry; -1 for zero.
int dexp(const QZ& e, std::int64_t p) {
    if (e.is_zero()) return -1;
    int v = vp(e.den(), p);
    if (checked_pow(p, v) != e.den())
        fail_domain("decompose: entry denominator is not a power of the part prime");
    return v;
}

/// num * p^{m - dexp}: the entry as an integer over the common denominator p^m.
std::int64_t scaled_num(const QZ& e, std::int64_t p, int m) {
    if (e.is_zero()) return 0;
    int d = dexp(e, p);
    if (d > m) fail_domain("decompose: entry finer than the pivot scale");
    return checked_mul(e.num(), checked_pow(p, m - d));
}

void check_square_symmetric(const QZMat& a, const char* who) {
    int n = int(a.size());
    for (const auto& row : a)
        if (int(row.size()) != n) fail(std::string(who) + ": matrix not square");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(a[i][j] == a[j][i])) fail(std::string(who) + ": matrix not symmetric");
}

/// Working state of a decomposition: the gram (and q values in quadratic mode)
/// of the current generators, plus the generator coordinate matrix.  Ops keep
/// everything consistent; with a group attached, each op asserts the
/// order-preservation half of the automorphism criterion (the generation half
/// holds automatically: Flip/Add are unimodular and Scale units are checked).
struct Engine {
    QZMat gram;
    std::vector<QZ> qdiag;  // empty in bilinear mode
    const FinAbGroup* group = nullptr;
    std::int64_t gen_mod = 0;  // standalone mode: coefficient modulus
    IMat gens;                 // gens[a][j] = coordinate of f_j on factor a
    std::vector<RowColOp>* log = nullptr;

    int n() const { return int(gram.size()); }
    bool quad() const { return !qdiag.empty(); }

    std::int64_t row_mod(int a) const {
        return group ? group->factors()[a].order : gen_mod;
    }

    std::int64_t col_order(int j) const {
        std::int64_t l = 1;
        for (int a = 0; a < n(); ++a) {
            std::int64_t oa = group->factors()[a].order;
            std::int64_t o = oa / gcd64(oa, gens[a][j]);
            l = l / gcd64(l, o) * o;
        }
        return l;
    }

    void record(RowColOp::Kind k, int i, int j, std::int64_t r) {
        if (log) log->push_back(RowColOp{k, i, j, r});
    }

    void flip(int i, int j) {
        if (i == j) return;
        std::swap(gram[i], gram[j]);
        for (auto& row : gram) std::swap(row[i], row[j]);
        if (quad()) std::swap(qdiag[i], qdiag[j]);
        for (auto& row : gens) std::swap(row[i], row[j]);
        record(RowColOp::Kind::Flip, i, j, 1);
    }

    // f_dst += c * f_src
    void add(int dst, int src, std::int64_t c) {
        if (dst == src) fail_domain("decompose: Add with equal indices");
        if (c == 0) return;
        std::int64_t before = group ? col_order(dst) : 0;
        QZ corner = gram[dst][dst] + gram[dst][src].scaled(c).scaled(2) +
                    gram[src][src].scaled(c).scaled(c);
        if (quad())
            qdiag[dst] = qdiag[dst] + qdiag[src].scaled(c).scaled(c) + gram[dst][src].scaled(c);
        for (int t = 0; t < n(); ++t) {
            if (t == dst) continue;
            QZ e = gram[dst][t] + gram[src][t].scaled(c);
            gram[dst][t] = e;
            gram[t][dst] = e;
        }
        gram[dst][dst] = corner;
        for (int a = 0; a < int(gens.size()); ++a) {
            std::int64_t m = row_mod(a);
            gens[a][dst] = mod_reduce(gens[a][dst] + mul_mod(mod_reduce(c, m), gens[a][src], m), m);
        }
        if (group && col_order(dst) != before)
            fail_domain("decompose: Add changed a generator order");
        record(RowColOp::Kind::Add, dst, src, c);
    }

    void scale(int i, std::int64_t s) {
        if (group && gcd64(s, col_order(i)) != 1)
            fail_domain("decompose: Scale by a non-unit");
        if (!group && gen_mod != 0 && gcd64(s, gen_mod) != 1)
            fail_domain("decompose: Scale by a non-unit");
        for (int t = 0; t < n(); ++t) {
            if (t == i) continue;
            gram[i][t] = gram[i][t].scaled(s);
            gram[t][i] = gram[i][t];
        }
        gram[i][i] = gram[i][i].scaled(s).scaled(s);
        if (quad()) qdiag[i] = qdiag[i].scaled(s).scaled(s);
        for (int a = 0; a < int(gens.size()); ++a) {
            std::int64_t m = row_mod(a);
            gens[a][i] = mul_mod(gens[a][i], mod_reduce(s, m), m);
        }
        record(RowColOp::Kind::Scale, i, i, s);
    }
};

struct RawBlock {
    int pos;
    int size;
    int m;  // pivot scale p^m; 0 for a zero block
};

std::pair<int, int> best_offdiag(const Engine& e, std::int64_t p, int pos, int hi, int m) {
    for (int i = pos; i < hi; ++i)
        for (int j = i + 1; j < hi; ++j)
            if (dexp(e.gram[i][j], p) == m) return {i, j};
    fail_domain("decompose: pivot search found nothing");
}

/// Block-diagonalize positions [lo, hi) of one p-part.  Pivot: finest scale
/// first, diagonal preferred (smallest index), else the lexicographically
/// first off-diagonal pair.  For odd p an off-diagonal pivot is promoted onto
/// the diagonal (f_i += f_j puts 2 b_ij there, and 2 is a unit); for p = 2
/// that fails and the pair is kept as a 2x2 block.
std::vector<RawBlock> pivot_part(Engine& e, std::int64_t p, int lo, int hi,
                                 bool allow_degenerate) {
    std::vector<RawBlock> raw;
    int pos = lo;
    while (pos < hi) {
        int m = -1;
        for (int i = pos; i < hi; ++i)
            for (int j = i; j < hi; ++j) m = std::max(m, dexp(e.gram[i][j], p));
        if (m <= 0) {
            if (!allow_degenerate) fail_domain("decompose: form is degenerate on a sub-block");
            for (; pos < hi; ++pos) raw.push_back({pos, 1, 0});
            break;
        }
        int di = -1;
        for (int i = pos; i < hi && di < 0; ++i)
            if (dexp(e.gram[i][i], p) == m) di = i;
        if (di < 0 && p != 2) {
            auto [bi, bj] = best_offdiag(e, p, pos, hi, m);
            e.add(bi, bj, 1);
            if (dexp(e.gram[bi][bi], p) != m)
                fail_domain("decompose: off-diagonal pivot promotion failed");
            di = bi;
        }
        if (di >= 0) {
            e.flip(pos, di);
            std::int64_t pm = checked_pow(p, m);
            std::int64_t unit = inv_mod(mod_reduce(e.gram[pos][pos].num(), pm), pm);
            for (int j = pos + 1; j < hi; ++j) {
                if (e.gram[pos][j].is_zero()) continue;
                std::int64_t beta = mod_reduce(scaled_num(e.gram[pos][j], p, m), pm);
                e.add(j, pos, mod_reduce(-mul_mod(beta, unit, pm), pm));
                if (!e.gram[pos][j].is_zero())
                    fail_domain("decompose: sweep failed to clear a row");
            }
            raw.push_back({pos, 1, m});
            pos += 1;
            continue;
        }
        // p = 2, every diagonal entry strictly coarser: indecomposable 2x2.
        auto [bi, bj] = best_offdiag(e, p, pos, hi, m);
        e.flip(pos, bi);
        e.flip(pos + 1, bj);  // bj > bi >= pos, so the first flip left it alone
        std::int64_t pm = checked_pow(p, m);
        std::int64_t upp = mod_reduce(scaled_num(e.gram[pos][pos], 2, m), pm);
        std::int64_t upq = mod_reduce(scaled_num(e.gram[pos][pos + 1], 2, m), pm);
        std::int64_t uqq = mod_reduce(scaled_num(e.gram[pos + 1][pos + 1], 2, m), pm);
        std::int64_t det = mod_reduce(mul_mod(upp, uqq, pm) - mul_mod(upq, upq, pm), pm);
        std::int64_t dinv = inv_mod(det, pm);
        for (int l = pos + 2; l < hi; ++l) {
            std::int64_t u = mod_reduce(scaled_num(e.gram[pos][l], 2, m), pm);
            std::int64_t v = mod_reduce(scaled_num(e.gram[pos + 1][l], 2, m), pm);
            if (u == 0 && v == 0) continue;
            std::int64_t r1 = mod_reduce(
                -mul_mod(dinv, mod_reduce(mul_mod(uqq, u, pm) - mul_mod(upq, v, pm), pm), pm), pm);
            std::int64_t r2 = mod_reduce(
                -mul_mod(dinv, mod_reduce(mul_mod(upp, v, pm) - mul_mod(upq, u, pm), pm), pm), pm);
            e.add(l, pos, r1);
            e.add(l, pos + 1, r2);
            if (!e.gram[pos][l].is_zero() || !e.gram[pos + 1][l].is_zero())
                fail_domain("decompose: 2x2 sweep failed to clear a row");
        }
        raw.push_back({pos, 2, m});
        pos += 2;
    }
    return raw;
}

char normalize_rank1_odd(Engine& e, int pos, int m, std::int64_t p) {
    std::int64_t pm = checked_pow(p, m);
    std::int64_t eps = e.gram[pos][pos].num();
    int ls = legendre(eps, p);
    std::int64_t target = ls == 1 ? 1 : quadratic_nonresidue(p);
    auto s = sqrt_mod_odd_ppower(mul_mod(target, inv_mod(eps, pm), pm), p, m);
    if (!s) fail_domain("decompose: rank-1 scaling square root missing");
    if (*s != 1) e.scale(pos, *s);
    if (!(e.gram[pos][pos] == QZ::of(target, pm)))
        fail_domain("decompose: rank-1 normalization missed its target");
    if (e.quad()) {
        // 2 is a unit, so q is forced: q(f) = (p^m + 1)/2 * b(f, f).
        std::int64_t qn = mul_mod(target, (pm + 1) / 2, pm);
        if (!(e.qdiag[pos] == QZ::of(qn, pm)))
            fail_domain("decompose: odd-part q value inconsistent with its bilinear form");
    }
    return ls == 1 ? 'A' : 'B';
}

constexpr std::int64_t kTwoTargets[4] = {1, -1, 5, -5};
constexpr char kTwoTags[4] = {'A', 'B', 'C', 'D'};

char normalize_rank1_two(Engine& e, int pos, int m) {
    bool quad = e.quad();
    int md = quad ? m + 1 : m;
    std::int64_t mod = checked_pow(2, md);
    std::int64_t val;
    if (quad) {
        if (dexp(e.qdiag[pos], 2) != m + 1)
            fail_domain("decompose: rank-1 q value has the wrong denominator");
        val = e.qdiag[pos].num();
    } else {
        val = e.gram[pos][pos].num();
    }
    std::int64_t cls = checked_pow(2, std::min(md, 3));
    int pick = -1;
    for (int t = 0; t < 4 && pick < 0; ++t)
        if (mod_reduce(kTwoTargets[t], cls) == mod_reduce(val, cls)) pick = t;
    if (pick < 0) fail_domain("decompose: no unit class matched");
    std::int64_t target = mod_reduce(kTwoTargets[pick], mod);
    auto s = sqrt_mod_two_power(mul_mod(target, inv_mod(val, mod), mod), md);
    if (!s) fail_domain("decompose: rank-1 scaling square root missing");
    if (*s != 1) e.scale(pos, *s);
    if (quad) {
        if (!(e.qdiag[pos] == QZ::of(target, mod)) ||
            !(e.gram[pos][pos] == QZ::of(target, mod / 2)))
            fail_domain("decompose: rank-1 normalization missed its target");
    } else if (!(e.gram[pos][pos] == QZ::of(target, mod))) {
        fail_domain("decompose: rank-1 normalization missed its target");
    }
    return kTwoTags[pick];
}

IMat transpose2(const IMat& a) { return {{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}; }

/// Right-multiply the generator pair (pos, pos+1) by t (mod 2^{r+1}): reduce t
/// to the identity by elementary column operations, then replay the inverses
/// in reverse order.
void apply_pair_transform(Engine& e, int pos, const IMat& t, std::int64_t mod) {
    std::int64_t t00 = mod_reduce(t[0][0], mod), t01 = mod_reduce(t[0][1], mod);
    std::int64_t t10 = mod_reduce(t[1][0], mod), t11 = mod_reduce(t[1][1], mod);
    struct Step {
        int kind;  // 0: col0 += x*col1, 1: col1 += x*col0, 2: col0 *= x, 3: col1 *= x
        std::int64_t x;
    };
    std::vector<Step> steps;
    if (t00 % 2 == 0) {
        // det odd forces both off-diagonal entries odd here
        t00 = mod_reduce(t00 + t01, mod);
        t10 = mod_reduce(t10 + t11, mod);
        steps.push_back({0, 1});
    }
    std::int64_t u = inv_mod(t00, mod);
    t10 = mul_mod(t10, u, mod);
    steps.push_back({2, u});
    if (t01 != 0) {
        t11 = mod_reduce(t11 - mul_mod(t01, t10, mod), mod);
        steps.push_back({1, mod - t01});
        t01 = 0;
    }
    std::int64_t w = inv_mod(t11, mod);
    steps.push_back({3, w});
    if (t10 != 0) {
        steps.push_back({0, mod - t10});
        t10 = 0;
    }
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        switch (it->kind) {
            case 0: e.add(pos, pos + 1, mod_reduce(-it->x, mod)); break;
            case 1: e.add(pos + 1, pos, mod_reduce(-it->x, mod)); break;
            case 2: e.scale(pos, inv_mod(it->x, mod)); break;
            default: e.scale(pos + 1, inv_mod(it->x, mod)); break;
        }
    }
}

/// Normalize an indecomposable 2-adic pair at (pos, pos+1), scale 2^m, to the
/// hyperbolic (E) or hexagonal (F) table data and return the tag.
char rank2_normalize_core(Engine& e, int pos, int m) {
    std::int64_t pm = checked_pow(2, m);
    std::int64_t mod = checked_mul(2, pm);
    std::int64_t b = e.gram[pos][pos + 1].num();  // denominator exactly 2^m, so odd
    std::int64_t a, c;
    bool hex;
    char tag;
    if (e.quad()) {
        a = mod_reduce(scaled_num(e.qdiag[pos], 2, m), mod);
        c = mod_reduce(scaled_num(e.qdiag[pos + 1], 2, m), mod);
        hex = (a % 2 != 0) && (c % 2 != 0);
        tag = hex ? 'F' : 'E';
    } else {
        std::int64_t upp = scaled_num(e.gram[pos][pos], 2, m);
        std::int64_t uqq = scaled_num(e.gram[pos + 1][pos + 1], 2, m);
        if (upp % 2 != 0 || uqq % 2 != 0)
            fail_domain("decompose: 2x2 block has a full-scale diagonal entry");
        // Any parity lift of the halved diagonal gives a quadratic refinement;
        // its witness also carries the bilinear data onto the table gram.
        a = mod_reduce(upp / 2, mod);
        c = mod_reduce(uqq / 2, mod);
        hex = (a % 2 != 0) && (c % 2 != 0);
        // At scale 1/2 the hexagonal and hyperbolic bilinear grams coincide.
        tag = (m == 1) ? 'E' : (hex ? 'F' : 'E');
    }
    IMat s = hensel_lift(hex ? HenselSystem::Hexagonal : HenselSystem::Hyperbolic, a,
                         mod_reduce(b, mod), c, m + 1);
    IMat t = transpose2(snf::mat_inv(s, mod));
    apply_pair_transform(e, pos, t, mod);
    IrreducibleBlock blk{tag, 2, m};
    DiscForm table = block_bilinear(blk);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!(e.gram[pos + i][pos + j] == table.gram[i][j]))
                fail_domain("decompose: rank-2 normalization missed its target");
    if (e.quad()) {
        QuadForm qt = block_quadratic(blk);
        if (!(e.qdiag[pos] == qt.qdiag[0]) || !(e.qdiag[pos + 1] == qt.qdiag[1]))
            fail_domain("decompose: rank-2 q values missed their target");
    }
    return tag;
}

void place_block(const IrreducibleBlock& b, int pos, QZMat& gram, std::vector<QZ>* qd) {
    DiscForm bb = block_bilinear(b);
    int k = block_rank(b);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) gram[pos + i][pos + j] = bb.gram[i][j];
    if (qd) {
        QuadForm qb = block_quadratic(b);
        for (int i = 0; i < k; ++i) (*qd)[pos + i] = qb.qdiag[i];
    }
}

/// Per-part inverse of a block-diagonal basis change, assembled full-size.
IMat assemble_inverse(const FinAbGroup& g, const IMat& s) {
    int n = g.rank();
    IMat out(n, std::vector<std::int64_t>(n, 0));
    for (const auto& part : sylow_parts(g)) {
        int k = int(part.idx.size());
        int rmax = 0;
        for (int i : part.idx) rmax = std::max(rmax, g.factors()[i].r);
        std::int64_t mod = checked_pow(part.p, rmax);
        snf::Mat sp(k, std::vector<std::int64_t>(k));
        for (int a = 0; a < k; ++a)
            for (int c = 0; c < k; ++c) sp[a][c] = mod_reduce(s[part.idx[a]][part.idx[c]], mod);
        snf::Mat inv = snf::mat_inv(sp, mod);
        for (int a = 0; a < k; ++a)
            for (int c = 0; c < k; ++c) out[part.idx[a]][part.idx[c]] = inv[a][c];
    }
    return out;
}

QZMat conj_by(const QZMat& d, const IMat& m) {
    int n = int(d.size());
    QZMat t(n, std::vector<QZ>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QZ acc;
            for (int k = 0; k < n; ++k) acc = acc + d[i][k].scaled(m[k][j]);
            t[i][j] = acc;
        }
    QZMat r(n, std::vector<QZ>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QZ acc;
            for (int k = 0; k < n; ++k) acc = acc + t[k][j].scaled(m[k][i]);
            r[i][j] = acc;
        }
    return r;
}

constexpr int kRoundTripRankCap = 48;

Decomposition wall_engine(const FinAbGroup& g, const QZMat& gram, const std::vector<QZ>* q0) {
    if (radical(DiscForm(g, gram)).order != 1)
        fail_domain("wall_decompose: form is degenerate");
    int n = g.rank();
    Decomposition out;
    Engine e;
    e.gram = gram;
    if (q0) e.qdiag = *q0;
    e.group = &g;
    e.gens = snf::identity(n);
    e.log = &out.ops;
    for (const auto& part : sylow_parts(g)) {
        int lo = part.idx.front(), hi = part.idx.back() + 1;
        if (int(part.idx.size()) != hi - lo)
            fail_domain("wall_decompose: Sylow part not contiguous");
        for (const RawBlock& rb : pivot_part(e, part.p, lo, hi, false)) {
            std::int64_t pm = checked_pow(part.p, rb.m);
            if (e.col_order(rb.pos) != pm ||
                (rb.size == 2 && e.col_order(rb.pos + 1) != pm))
                fail_domain("wall_decompose: pivot generator order mismatch");
            char tag;
            if (part.p != 2) tag = normalize_rank1_odd(e, rb.pos, rb.m, part.p);
            else if (rb.size == 1) tag = normalize_rank1_two(e, rb.pos, rb.m);
            else tag = rank2_normalize_core(e, rb.pos, rb.m);
            out.blocks.push_back(IrreducibleBlock{tag, part.p, rb.m});
        }
    }
    QZMat exp_gram(n, std::vector<QZ>(n));
    std::vector<QZ> exp_q(n);
    int off = 0;
    for (const auto& blk : out.blocks) {
        place_block(blk, off, exp_gram, q0 ? &exp_q : nullptr);
        off += block_rank(blk);
    }
    if (off != n) fail_domain("wall_decompose: rank bookkeeping mismatch");
    for (int i = 0; i < n; ++i) {
        if (q0 && !(e.qdiag[i] == exp_q[i]))
            fail_domain("wall_decompose: final q values are not the table data");
        for (int j = 0; j < n; ++j)
            if (!(e.gram[i][j] == exp_gram[i][j]))
                fail_domain("wall_decompose: final gram is not block diagonal table data");
    }
    if (n <= kRoundTripRankCap) {
        IMat sinv = assemble_inverse(g, e.gens);
        QZMat back = conj_by(exp_gram, sinv);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(back[i][j] == gram[i][j]))
                    fail_domain("wall_decompose: round trip does not restore the input");
        if (q0) {
            QuadForm model(g, exp_q, exp_gram);
            for (int i = 0; i < n; ++i) {
                GroupElem x(n);
                for (int a = 0; a < n; ++a)
                    x[a] = mod_reduce(sinv[a][i], g.factors()[a].order);
                if (!(eval_q(model, x) == (*q0)[i]))
                    fail_domain("wall_decompose: round trip does not restore q");
            }
        }
    }
    out.basis_change = e.gens;
    return out;
}

}  // namespace

QZMat apply_rowcol(const QZMat& gram, const RowColOp& op) {
    check_square_symmetric(gram, "apply_rowcol");
    int n = int(gram.size());
    if (op.i < 0 || op.i >= n || (op.kind != RowColOp::Kind::Scale && (op.j < 0 || op.j >= n)))
        fail("apply_rowcol: index out of range");
    Engine e;
    e.gram = gram;
    switch (op.kind) {
        case RowColOp::Kind::Flip: e.flip(op.i, op.j); break;
        case RowColOp::Kind::Add:
            if (op.i == op.j) fail("apply_rowcol: Add needs distinct indices");
            e.add(op.i, op.j, op.r);
            break;
        case RowColOp::Kind::Scale: e.scale(op.i, op.r); break;
    }
    return e.gram;
}

namespace {

std::int64_t order_of_col(const FinAbGroup& g, const IMat& m, int j) {
    std::int64_t l = 1;
    for (int a = 0; a < g.rank(); ++a) {
        std::int64_t oa = g.factors()[a].order;
        std::int64_t o = oa / gcd64(oa, mod_reduce(m[a][j], oa));
        l = l / gcd64(l, o) * o;
    }
    return l;
}

int rank_mod_p(snf::Mat m, std::int64_t p) {
    int rows = int(m.size());
    if (rows == 0) return 0;
    int cols = int(m[0].size());
    for (auto& row : m)
        for (auto& x : row) x = mod_reduce(x, p);
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pr = -1;
        for (int i = rank; i < rows && pr < 0; ++i)
            if (m[i][c] != 0) pr = i;
        if (pr < 0) continue;
        std::swap(m[pr], m[rank]);
        std::int64_t inv = inv_mod(m[rank][c], p);
        for (int cc = 0; cc < cols; ++cc) m[rank][cc] = mul_mod(m[rank][cc], inv, p);
        for (int i = 0; i < rows; ++i) {
            if (i == rank || m[i][c] == 0) continue;
            std::int64_t f = m[i][c];
            for (int cc = 0; cc < cols; ++cc)
                m[i][cc] = mod_reduce(m[i][cc] - mul_mod(f, m[rank][cc], p), p);
        }
        ++rank;
    }
    return rank;
}

}  // namespace

bool validity_check(const FinAbGroup& g, const IMat& gens, const RowColOp& op) {
    int n = g.rank();
    if (int(gens.size()) != n) fail("validity_check: generator matrix size mismatch");
    for (const auto& row : gens)
        if (int(row.size()) != n) fail("validity_check: generator matrix size mismatch");
    if (op.i < 0 || op.i >= n || (op.kind != RowColOp::Kind::Scale && (op.j < 0 || op.j >= n)))
        fail("validity_check: index out of range");
    if (op.kind == RowColOp::Kind::Add && op.i == op.j)
        fail("validity_check: Add needs distinct indices");
    IMat t(n, std::vector<std::int64_t>(n));
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j) t[a][j] = mod_reduce(gens[a][j], g.factors()[a].order);
    for (int a = 0; a < n; ++a) {
        std::int64_t oa = g.factors()[a].order;
        switch (op.kind) {
            case RowColOp::Kind::Flip: std::swap(t[a][op.i], t[a][op.j]); break;
            case RowColOp::Kind::Add:
                t[a][op.i] =
                    mod_reduce(t[a][op.i] + mul_mod(mod_reduce(op.r, oa), t[a][op.j], oa), oa);
                break;
            case RowColOp::Kind::Scale:
                t[a][op.i] = mul_mod(t[a][op.i], mod_reduce(op.r, oa), oa);
                break;
        }
    }
    // G = +<f_k> exactly when the f_k generate and prod ord(f_k) = |G|;
    // compare order products as per-prime valuation sums to dodge overflow.
    std::vector<std::int64_t> col_ord(n);
    for (int j = 0; j < n; ++j) col_ord[j] = order_of_col(g, t, j);
    for (const auto& part : sylow_parts(g)) {
        int want = 0, have = 0;
        for (int i : part.idx) want += g.factors()[i].r;
        for (int j = 0; j < n; ++j) have += vp(col_ord[j], part.p);
        if (have != want) return false;
        snf::Mat rows(part.idx.size(), std::vector<std::int64_t>(n));
        for (int a = 0; a < int(part.idx.size()); ++a)
            for (int j = 0; j < n; ++j) rows[a][j] = t[part.idx[a]][j];
        if (rank_mod_p(std::move(rows), part.p) != int(part.idx.size())) return false;
    }
    return true;
}

int block_rank(const IrreducibleBlock& b) { return (b.tag == 'E' || b.tag == 'F') ? 2 : 1; }

void check_block(const IrreducibleBlock& b) {
    if (b.r < 1) fail("block: exponent must be positive");
    if (b.p == 2) {
        if (b.tag < 'A' || b.tag > 'F') fail("block: unknown 2-adic tag");
    } else {
        if (!is_prime(b.p) || b.p < 3) fail("block: p must be prime");
        if (b.tag != 'A' && b.tag != 'B') fail("block: odd-p tag must be A or B");
    }
}

namespace {

std::int64_t two_tag_unit(char tag) {
    switch (tag) {
        case 'A': return 1;
        case 'B': return -1;
        case 'C': return 5;
        default: return -5;  // 'D'
    }
}

}  // namespace

DiscForm block_bilinear(const IrreducibleBlock& b) {
    check_block(b);
    std::int64_t pr = checked_pow(b.p, b.r);
    if (b.tag == 'E') {
        QZ h = QZ::of(1, pr);
        return DiscForm(FinAbGroup({pr, pr}), {{QZ(), h}, {h, QZ()}});
    }
    if (b.tag == 'F') {
        QZ d = QZ::of(2, pr), h = QZ::of(1, pr);
        return DiscForm(FinAbGroup({pr, pr}), {{d, h}, {h, d}});
    }
    std::int64_t unit = b.p == 2 ? two_tag_unit(b.tag)
                                 : (b.tag == 'A' ? 1 : quadratic_nonresidue(b.p));
    return DiscForm(FinAbGroup({pr}), {{QZ::of(unit, pr)}});
}

QuadForm block_quadratic(const IrreducibleBlock& b) {
    check_block(b);
    std::int64_t pr = checked_pow(b.p, b.r);
    if (b.tag == 'E') {
        QZ h = QZ::of(1, pr);
        return QuadForm(FinAbGroup({pr, pr}), {QZ(), QZ()}, {{QZ(), h}, {h, QZ()}});
    }
    if (b.tag == 'F') {
        QZ d = QZ::of(2, pr), h = QZ::of(1, pr);
        return QuadForm(FinAbGroup({pr, pr}), {h, h}, {{d, h}, {h, d}});
    }
    if (b.p == 2) {
        std::int64_t unit = two_tag_unit(b.tag);
        return QuadForm(FinAbGroup({pr}), {QZ::of(unit, checked_mul(2, pr))},
                        {{QZ::of(unit, pr)}});
    }
    std::int64_t unit = b.tag == 'A' ? 1 : quadratic_nonresidue(b.p);
    std::int64_t qn = mul_mod(unit, (pr + 1) / 2, pr);
    return QuadForm(FinAbGroup({pr}), {QZ::of(qn, pr)}, {{QZ::of(unit, pr)}});
}

std::string block_name(const IrreducibleBlock& b) {
    check_block(b);
    return std::string(1, b.tag) + std::to_string(checked_pow(b.p, b.r));
}

Decomposition wall_decompose(const DiscForm& f) {
    return wall_engine(f.group, f.gram, nullptr);
}

Decomposition wall_decompose(const QuadForm& f) {
    return wall_engine(f.group, f.bgram, &f.qdiag);
}

std::pair<IMat, std::vector<QZ>> diagonalize_odd(const QZMat& a, std::int64_t p) {
    if (p < 3 || !is_prime(p)) fail("diagonalize_odd: p must be an odd prime");
    check_square_symmetric(a, "diagonalize_odd");
    int n = int(a.size());
    int mmax = 1;
    for (const auto& row : a)
        for (const auto& x : row) mmax = std::max(mmax, dexp(x, p));
    Engine e;
    e.gram = a;
    e.gen_mod = checked_pow(p, mmax);
    e.gens = snf::identity(n);
    std::vector<QZ> diag(n);
    for (const RawBlock& rb : pivot_part(e, p, 0, n, true)) {
        if (rb.m == 0) continue;  // zero entry stays zero
        normalize_rank1_odd(e, rb.pos, rb.m, p);
        diag[rb.pos] = e.gram[rb.pos][rb.pos];
    }
    return {e.gens, diag};
}

TwoAdicBlocks block_diagonalize_two(const QZMat& a) {
    check_square_symmetric(a, "block_diagonalize_two");
    int n = int(a.size());
    int mmax = 1;
    for (const auto& row : a)
        for (const auto& x : row) mmax = std::max(mmax, dexp(x, 2));
    Engine e;
    e.gram = a;
    e.gen_mod = checked_pow(2, mmax);
    e.gens = snf::identity(n);
    TwoAdicBlocks out;
    for (const RawBlock& rb : pivot_part(e, 2, 0, n, true)) {
        out.blocks.push_back({rb.pos, rb.size});
        if (rb.size == 1 && rb.m >= 1) normalize_rank1_two(e, rb.pos, rb.m);
    }
    out.s = e.gens;
    out.gram = e.gram;
    return out;
}

namespace {

std::array<std::int64_t, 3> system_eval(HenselSystem sys, const IMat& s, std::int64_t mod) {
    std::int64_t s11 = mod_reduce(s[0][0], mod), s12 = mod_reduce(s[0][1], mod);
    std::int64_t s21 = mod_reduce(s[1][0], mod), s22 = mod_reduce(s[1][1], mod);
    auto mr = [mod](std::int64_t x) { return mod_reduce(x, mod); };
    auto mm = [mod](std::int64_t x, std::int64_t y) { return mul_mod(x, y, mod); };
    if (sys == HenselSystem::Hexagonal) {
        std::int64_t a = mr(mm(s11, s11) + mm(s11, s12) + mm(s12, s12));
        std::int64_t b = mr(mr(mm(2, mm(s11, s21)) + mm(s11, s22)) +
                            mr(mm(s21, s12) + mm(2, mm(s12, s22))));
        std::int64_t c = mr(mm(s21, s21) + mm(s21, s22) + mm(s22, s22));
        return {a, b, c};
    }
    std::int64_t a = mm(s11, s12);
    std::int64_t b = mr(mm(s11, s22) + mm(s21, s12));
    std::int64_t c = mm(s21, s22);
    return {a, b, c};
}

// Gradients of both systems agree mod 2 (the extra terms have even
// coefficients): rows (s12, s11, 0, 0), (s22, s21, s12, s11), (0, 0, s22, s21).
std::array<std::array<int, 4>, 3> system_jacobian_mod2(const IMat& s) {
    int s11 = int(s[0][0] & 1), s12 = int(s[0][1] & 1);
    int s21 = int(s[1][0] & 1), s22 = int(s[1][1] & 1);
    return {{{s12, s11, 0, 0}, {s22, s21, s12, s11}, {0, 0, s22, s21}}};
}

std::array<int, 4> solve_mod2(std::array<std::array<int, 4>, 3> j, std::array<int, 3> r) {
    std::array<int, 3> pivot_col{-1, -1, -1};
    int rank = 0;
    for (int c = 0; c < 4 && rank < 3; ++c) {
        int pr = -1;
        for (int i = rank; i < 3 && pr < 0; ++i)
            if (j[i][c]) pr = i;
        if (pr < 0) continue;
        std::swap(j[pr], j[rank]);
        std::swap(r[pr], r[rank]);
        for (int i = 0; i < 3; ++i) {
            if (i == rank || !j[i][c]) continue;
            for (int cc = 0; cc < 4; ++cc) j[i][cc] ^= j[rank][cc];
            r[i] ^= r[rank];
        }
        pivot_col[rank] = c;
        ++rank;
    }
    for (int i = rank; i < 3; ++i)
        if (r[i]) fail_domain("hensel_lift: inconsistent lift step");
    std::array<int, 4> d{};
    for (int i = 0; i < rank; ++i) d[pivot_col[i]] = r[i];
    return d;
}

int jacobian_rank_mod2(const std::array<std::array<int, 4>, 3>& j) {
    std::array<std::array<int, 4>, 3> m = j;
    int rank = 0;
    for (int c = 0; c < 4 && rank < 3; ++c) {
        int pr = -1;
        for (int i = rank; i < 3 && pr < 0; ++i)
            if (m[i][c]) pr = i;
        if (pr < 0) continue;
        std::swap(m[pr], m[rank]);
        for (int i = rank + 1; i < 3; ++i)
            if (m[i][c])
                for (int cc = 0; cc < 4; ++cc) m[i][cc] ^= m[rank][cc];
        ++rank;
    }
    return rank;
}

}  // namespace

IMat hensel_lift(HenselSystem sys, std::int64_t a, std::int64_t b, std::int64_t c, int n) {
    if (n < 1 || n > 62) fail("hensel_lift: modulus exponent out of range");
    std::int64_t mod = checked_pow(2, n);
    a = mod_reduce(a, mod);
    b = mod_reduce(b, mod);
    c = mod_reduce(c, mod);
    if (b % 2 == 0) fail("hensel_lift: middle target must be odd");
    if (sys == HenselSystem::Hexagonal) {
        if (a % 2 == 0 || c % 2 == 0) fail("hensel_lift: hexagonal targets must all be odd");
    } else if (a % 2 != 0 && c % 2 != 0) {
        fail("hensel_lift: hyperbolic targets need an even corner");
    }
    IMat s = sys == HenselSystem::Hexagonal ? IMat{{1, 0}, {0, 1}} : IMat{{a, 1}, {1, c}};
    if (jacobian_rank_mod2(system_jacobian_mod2(s)) != 3)
        fail_domain("hensel_lift: seed Jacobian is singular");
    const std::array<std::int64_t, 3> target{a, b, c};
    for (int k = 1; k < n; ++k) {
        std::array<std::int64_t, 3> cur = system_eval(sys, s, mod);
        std::array<int, 3> res{};
        bool any = false;
        for (int t = 0; t < 3; ++t) {
            std::int64_t diff = mod_reduce(target[t] - cur[t], mod);
            if (diff % checked_pow(2, k) != 0)
                fail_domain("hensel_lift: lost an established congruence");
            res[t] = int((diff >> k) & 1);
            any = any || res[t];
        }
        if (!any) continue;
        std::array<int, 4> d = solve_mod2(system_jacobian_mod2(s), res);
        std::int64_t step = checked_pow(2, k);
        s[0][0] = mod_reduce(s[0][0] + d[0] * step, mod);
        s[0][1] = mod_reduce(s[0][1] + d[1] * step, mod);
        s[1][0] = mod_reduce(s[1][0] + d[2] * step, mod);
        s[1][1] = mod_reduce(s[1][1] + d[3] * step, mod);
    }
    std::array<std::int64_t, 3> fin = system_eval(sys, s, mod);
    for (int t = 0; t < 3; ++t)
        if (fin[t] != target[t]) fail_domain("hensel_lift: verification failed");
    return s;
}

Rank2Result normalize_rank2(const QZMat& block) {
    check_square_symmetric(block, "normalize_rank2");
    if (block.size() != 2) fail("normalize_rank2: need a 2x2 gram");
    int m = dexp(block[0][1], 2);
    if (m < 1) fail("normalize_rank2: off-diagonal entry must carry the finest scale");
    for (int i = 0; i < 2; ++i)
        if (dexp(block[i][i], 2) >= m)
            fail("normalize_rank2: block is decomposable (diagonal at full scale)");
    Engine e;
    e.gram = block;
    e.gen_mod = checked_pow(2, m + 1);
    e.gens = snf::identity(2);
    char tag = rank2_normalize_core(e, 0, m);
    return Rank2Result{IrreducibleBlock{tag, 2, m}, e.gens};
}

QuadForm lift_quadratic(const DiscForm& b) {
    Decomposition d = wall_decompose(b);
    int n = b.group.rank();
    QZMat dg(n, std::vector<QZ>(n));
    std::vector<QZ> dq(n);
    int off = 0;
    for (const auto& blk : d.blocks) {
        place_block(blk, off, dg, &dq);
        off += block_rank(blk);
    }
    QuadForm model(b.group, std::move(dq), std::move(dg));
    IMat sinv = assemble_inverse(b.group, d.basis_change);
    std::vector<QZ> q0(n);
    for (int i = 0; i < n; ++i) {
        GroupElem x(n);
        for (int a = 0; a < n; ++a) x[a] = mod_reduce(sinv[a][i], b.group.factors()[a].order);
        q0[i] = eval_q(model, x);
    }
    return QuadForm(b.group, std::move(q0), b.gram);
}

}  // namespace tyind
