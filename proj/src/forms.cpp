#include "tyind/forms.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "localsnf.hpp"
#include "tyind/numtheory.hpp"

namespace tyind {

namespace {

void check_gram(const FinAbGroup& g, const QZMat& m) {
    int n = g.rank();
    if (int(m.size()) != n) fail("gram: row count mismatch");
    for (const auto& row : m)
        if (int(row.size()) != n) fail("gram: column count mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!(m[i][j] == m[j][i])) fail("gram: not symmetric");
            std::int64_t cap = gcd64(g.factors()[i].order, g.factors()[j].order);
            if (cap % m[i][j].den() != 0)
                fail("gram: entry denominator incompatible with generator orders");
        }
}

}  // namespace

DiscForm::DiscForm(FinAbGroup g, QZMat m) : group(std::move(g)), gram(std::move(m)) {
    check_gram(group, gram);
}

QuadForm::QuadForm(FinAbGroup g, std::vector<QZ> q, QZMat b)
    : group(std::move(g)), qdiag(std::move(q)), bgram(std::move(b)) {
    check_gram(group, bgram);
    if (int(qdiag.size()) != group.rank()) fail("QuadForm: qdiag size mismatch");
    for (int i = 0; i < group.rank(); ++i) {
        std::int64_t n = group.factors()[i].order;
        if (checked_mul(2, n) % qdiag[i].den() != 0)
            fail("QuadForm: q value denominator exceeds 2*order");
        if (!(bgram[i][i] == qdiag[i].scaled(2)))
            fail("QuadForm: diagonal of dq gram must equal 2q");
        if (!qdiag[i].scaled(n).scaled(n).is_zero())
            fail("QuadForm: q(order * e_i) must vanish");
    }
}

QZ eval_b(const DiscForm& f, const GroupElem& x, const GroupElem& y) {
    int n = f.group.rank();
    if (int(x.size()) != n || int(y.size()) != n) fail("eval_b: coordinate count mismatch");
    QZ acc;
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < n; ++j)
            acc = acc + f.gram[i][j].scaled(x[i]).scaled(y[j]);
    }
    return acc;
}

QZ eval_b(const QuadForm& f, const GroupElem& x, const GroupElem& y) {
    return eval_b(DiscForm(f.group, f.bgram), x, y);
}

QZ eval_q(const QuadForm& f, const GroupElem& x) {
    int n = f.group.rank();
    if (int(x.size()) != n) fail("eval_q: coordinate count mismatch");
    QZ acc;
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        acc = acc + f.qdiag[i].scaled(x[i]).scaled(x[i]);
        for (int j = i + 1; j < n; ++j)
            acc = acc + f.bgram[i][j].scaled(x[i]).scaled(x[j]);
    }
    return acc;
}

DiscForm boundary(const QuadForm& q) { return DiscForm(q.group, q.bgram); }

namespace {

std::vector<std::int64_t> concat_orders(const FinAbGroup& a, const FinAbGroup& b) {
    std::vector<std::int64_t> orders;
    for (const auto& f : a.factors()) orders.push_back(f.order);
    for (const auto& f : b.factors()) orders.push_back(f.order);
    return orders;
}

}  // namespace

DiscForm direct_sum(const DiscForm& a, const DiscForm& b) {
    std::vector<int> perm;
    FinAbGroup g = FinAbGroup::with_perm(concat_orders(a.group, b.group), perm);
    int ra = a.group.rank(), n = g.rank();
    QZMat m(n, std::vector<QZ>(n));
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < ra; ++j) m[perm[i]][perm[j]] = a.gram[i][j];
    for (int i = 0; i < b.group.rank(); ++i)
        for (int j = 0; j < b.group.rank(); ++j)
            m[perm[ra + i]][perm[ra + j]] = b.gram[i][j];
    return DiscForm(std::move(g), std::move(m));
}

QuadForm direct_sum(const QuadForm& a, const QuadForm& b) {
    std::vector<int> perm;
    FinAbGroup g = FinAbGroup::with_perm(concat_orders(a.group, b.group), perm);
    int ra = a.group.rank(), n = g.rank();
    QZMat m(n, std::vector<QZ>(n));
    std::vector<QZ> q(n);
    for (int i = 0; i < ra; ++i) {
        q[perm[i]] = a.qdiag[i];
        for (int j = 0; j < ra; ++j) m[perm[i]][perm[j]] = a.bgram[i][j];
    }
    for (int i = 0; i < b.group.rank(); ++i) {
        q[perm[ra + i]] = b.qdiag[i];
        for (int j = 0; j < b.group.rank(); ++j)
            m[perm[ra + i]][perm[ra + j]] = b.bgram[i][j];
    }
    return QuadForm(std::move(g), std::move(q), std::move(m));
}

DiscForm scale_form(const DiscForm& f, std::int64_t n) {
    QZMat m = f.gram;
    for (auto& row : m)
        for (auto& x : row) x = x.scaled(n);
    return DiscForm(f.group, std::move(m));
}

QuadForm scale_form(const QuadForm& f, std::int64_t n) {
    QZMat m = f.bgram;
    for (auto& row : m)
        for (auto& x : row) x = x.scaled(n);
    std::vector<QZ> q = f.qdiag;
    for (auto& x : q) x = x.scaled(n);
    return QuadForm(f.group, std::move(q), std::move(m));
}

namespace {

void check_tensor_matrix(const std::vector<std::vector<std::int64_t>>& m) {
    int k = int(m.size());
    if (k == 0) fail("tensor_matrix: empty matrix");
    for (const auto& row : m)
        if (int(row.size()) != k) fail("tensor_matrix: matrix not square");
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (m[i][j] != m[j][i]) fail("tensor_matrix: matrix not symmetric");
}

}  // namespace

DiscForm tensor_matrix(const std::vector<std::vector<std::int64_t>>& M, const DiscForm& f) {
    check_tensor_matrix(M);
    int k = int(M.size()), r = f.group.rank();
    std::vector<std::int64_t> orders;
    for (int t = 0; t < k; ++t)
        for (const auto& fac : f.group.factors()) orders.push_back(fac.order);
    std::vector<int> perm;
    FinAbGroup g = FinAbGroup::with_perm(orders, perm);
    int n = g.rank();
    QZMat m(n, std::vector<QZ>(n));
    for (int t = 0; t < k; ++t)
        for (int i = 0; i < r; ++i)
            for (int s = 0; s < k; ++s)
                for (int j = 0; j < r; ++j)
                    m[perm[t * r + i]][perm[s * r + j]] = f.gram[i][j].scaled(M[t][s]);
    return DiscForm(std::move(g), std::move(m));
}

QuadForm tensor_matrix(const std::vector<std::vector<std::int64_t>>& M, const QuadForm& f) {
    check_tensor_matrix(M);
    int k = int(M.size()), r = f.group.rank();
    std::vector<std::int64_t> orders;
    for (int t = 0; t < k; ++t)
        for (const auto& fac : f.group.factors()) orders.push_back(fac.order);
    std::vector<int> perm;
    FinAbGroup g = FinAbGroup::with_perm(orders, perm);
    int n = g.rank();
    QZMat m(n, std::vector<QZ>(n));
    std::vector<QZ> q(n);
    for (int t = 0; t < k; ++t)
        for (int i = 0; i < r; ++i) {
            q[perm[t * r + i]] = f.qdiag[i].scaled(M[t][t]);
            for (int s = 0; s < k; ++s)
                for (int j = 0; j < r; ++j)
                    m[perm[t * r + i]][perm[s * r + j]] = f.bgram[i][j].scaled(M[t][s]);
        }
    return QuadForm(std::move(g), std::move(q), std::move(m));
}

std::int64_t span_order(const FinAbGroup& g, const std::vector<GroupElem>& gens) {
    std::set<GroupElem> span;
    span.insert(zero_elem(g));
    for (const auto& raw : gens) {
        GroupElem x = reduce_elem(g, raw);
        std::int64_t o = element_order(g, x);
        std::set<GroupElem> bigger;
        for (const auto& s : span) {
            GroupElem cur = s;
            for (std::int64_t t = 0; t < o; ++t) {
                bigger.insert(cur);
                cur = add_elem(g, cur, x);
            }
        }
        span = std::move(bigger);
    }
    return std::int64_t(span.size());
}

std::optional<std::int64_t> order_bounded(const FinAbGroup& g, std::int64_t limit) {
    std::int64_t n = 1;
    for (const auto& f : g.factors()) {
        if (n > limit / f.order) return std::nullopt;
        n *= f.order;
    }
    return n <= limit ? std::optional<std::int64_t>(n) : std::nullopt;
}

namespace {

constexpr std::int64_t kEnumLimit = 4096;

bool in_radical(const DiscForm& f, const GroupElem& x) {
    int n = f.group.rank();
    for (int i = 0; i < n; ++i) {
        QZ acc;
        for (int j = 0; j < n; ++j) acc = acc + f.gram[i][j].scaled(x[j]);
        if (!acc.is_zero()) return false;
    }
    return true;
}

Subgroup radical_enumerated(const DiscForm& f) {
    std::vector<GroupElem> members;
    enumerate(f.group, [&](const GroupElem& x) {
        if (in_radical(f, x)) members.push_back(x);
    });
    Subgroup out;
    out.order = std::int64_t(members.size());
    std::set<GroupElem> span;
    span.insert(zero_elem(f.group));
    for (const auto& x : members) {
        if (span.count(x)) continue;
        out.generators.push_back(x);
        std::int64_t o = element_order(f.group, x);
        std::set<GroupElem> bigger;
        for (const auto& s : span) {
            GroupElem cur = s;
            for (std::int64_t t = 0; t < o; ++t) {
                bigger.insert(cur);
                cur = add_elem(f.group, cur, x);
            }
        }
        span = std::move(bigger);
    }
    if (std::int64_t(span.size()) != out.order)
        fail_domain("radical: generator closure disagrees with enumeration");
    return out;
}

// Integer matrix N*b on the Sylow p-part: entry (a,c) = N * gram[idx_a][idx_c].
snf::Mat part_pairing_matrix(const DiscForm& f, const std::vector<int>& idx, std::int64_t n_mod) {
    int np = int(idx.size());
    snf::Mat c(np, std::vector<std::int64_t>(np, 0));
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) {
            const QZ& e = f.gram[idx[a]][idx[b]];
            c[a][b] = mod_reduce(mul_mod(e.num(), n_mod / e.den(), n_mod), n_mod);
        }
    return c;
}

Subgroup radical_elimination(const DiscForm& f) {
    Subgroup out;
    for (const auto& part : sylow_parts(f.group)) {
        int rmax = 0;
        int sum_r = 0;
        for (int i : part.idx) {
            rmax = std::max(rmax, f.group.factors()[i].r);
            sum_r += f.group.factors()[i].r;
        }
        std::int64_t n_mod = checked_pow(part.p, rmax);
        auto s = snf::local_snf(part_pairing_matrix(f, part.idx, n_mod), part.p, rmax);
        int np = int(part.idx.size());
        // Solutions of x^t C = 0 over (Z/p^R)^n are spanned by p^{R-c_k} * row_k(U);
        // that kernel has p^{sum c_k} elements and maps onto the radical with
        // kernel of size p^{n R - sum r_i} (the relation lattice of G itself).
        int sum_c = 0;
        for (int k = 0; k < np; ++k) {
            sum_c += s.diag[k];
            std::int64_t mult = checked_pow(part.p, rmax - s.diag[k]);
            GroupElem gen = zero_elem(f.group);
            bool nonzero = false;
            for (int a = 0; a < np; ++a) {
                std::int64_t na = f.group.factors()[part.idx[a]].order;
                gen[part.idx[a]] = mul_mod(mult, s.u[k][a], na);
                nonzero = nonzero || gen[part.idx[a]] != 0;
            }
            if (nonzero) out.generators.push_back(std::move(gen));
        }
        out.order = checked_mul(out.order, checked_pow(part.p, sum_c + sum_r - np * rmax));
    }
    return out;
}

}  // namespace

Subgroup radical(const DiscForm& f) {
    if (f.group.rank() == 0) return Subgroup{};
    if (order_bounded(f.group, kEnumLimit)) return radical_enumerated(f);
    return radical_elimination(f);
}

Subgroup radical(const QuadForm& f) { return radical(DiscForm(f.group, f.bgram)); }

bool is_nondegenerate(const DiscForm& f) { return radical(f).order == 1; }
bool is_nondegenerate(const QuadForm& f) { return radical(f).order == 1; }

QuotientResult quotient_by_radical(const QuadForm& q) {
    Subgroup rad = radical(q);
    if (rad.order == 1) {
        QuotientResult out{q, true, {}};
        for (int i = 0; i < q.group.rank(); ++i) {
            GroupElem e = zero_elem(q.group);
            e[i] = 1;
            out.reps.push_back(std::move(e));
        }
        return out;
    }
    // q restricted to the radical is a homomorphism, so check generators only.
    for (const auto& gen : rad.generators)
        if (!eval_q(q, gen).is_zero())
            return QuotientResult{QuadForm(FinAbGroup{}, {}, {}), false, {}};

    DiscForm b(q.group, q.bgram);
    std::vector<std::int64_t> orders_new;
    std::vector<GroupElem> reps_new;
    for (const auto& part : sylow_parts(q.group)) {
        int np = int(part.idx.size());
        int rmax = 0;
        for (int i : part.idx) rmax = std::max(rmax, q.group.factors()[i].r);
        std::int64_t n_mod = checked_pow(part.p, rmax);
        // Columns: projections of radical generators to this part, then the
        // factor orders p^{r_i} (the relations of G itself).
        int gcount = int(rad.generators.size());
        snf::Mat m(np, std::vector<std::int64_t>(gcount + np, 0));
        for (int t = 0; t < gcount; ++t)
            for (int a = 0; a < np; ++a) m[a][t] = rad.generators[t][part.idx[a]] % n_mod;
        for (int a = 0; a < np; ++a)
            m[a][gcount + a] = checked_pow(part.p, q.group.factors()[part.idx[a]].r);
        auto s = snf::local_snf(m, part.p, rmax);
        for (int k = 0; k < np; ++k) {
            if (s.diag[k] == 0) continue;  // trivial quotient factor
            orders_new.push_back(checked_pow(part.p, s.diag[k]));
            GroupElem rep = zero_elem(q.group);
            for (int a = 0; a < np; ++a) {
                std::int64_t na = q.group.factors()[part.idx[a]].order;
                rep[part.idx[a]] = mod_reduce(s.uinv[a][k], na);
            }
            reps_new.push_back(std::move(rep));
        }
    }

    std::vector<int> perm;
    FinAbGroup g_new = FinAbGroup::with_perm(orders_new, perm);
    int n = g_new.rank();
    std::vector<GroupElem> reps(n);
    for (int k = 0; k < int(reps_new.size()); ++k) reps[perm[k]] = reps_new[k];
    std::vector<QZ> qd(n);
    QZMat bg(n, std::vector<QZ>(n));
    for (int i = 0; i < n; ++i) {
        qd[i] = eval_q(q, reps[i]);
        for (int j = 0; j < n; ++j) bg[i][j] = eval_b(b, reps[i], reps[j]);
    }
    QuotientResult out{QuadForm(std::move(g_new), std::move(qd), std::move(bg)), true,
                       std::move(reps)};
    if (!is_nondegenerate(out.form))
        fail_domain("quotient_by_radical: induced form still degenerate");
    if (auto total = order_bounded(q.group, kEnumLimit)) {
        if (checked_mul(out.form.group.order(), rad.order) != *total)
            fail_domain("quotient_by_radical: order bookkeeping mismatch");
    }
    return out;
}

}  // namespace tyind
