#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tyind/group.hpp"
#include "tyind/rational.hpp"

namespace tyind {

using QZMat = std::vector<std::vector<QZ>>;

/// Discriminant form (G, b): a symmetric bilinear form on G valued in Q/Z,
/// stored as the gram matrix b(e_i, e_j) over the group's cyclic generators.
struct DiscForm {
    FinAbGroup group;
    QZMat gram;

    DiscForm(FinAbGroup g, QZMat m);
};

/// Pre-metric group (G, q): a quadratic form together with its boundary
/// bilinear form dq(x,y) = q(x+y) - q(x) - q(y).  Stores q on the generators
/// (qdiag) plus the full gram matrix of dq (bgram); q at arbitrary elements is
/// recovered by the expansion formula in eval_q.
struct QuadForm {
    FinAbGroup group;
    std::vector<QZ> qdiag;
    QZMat bgram;

    QuadForm(FinAbGroup g, std::vector<QZ> q, QZMat b);
};

QZ eval_b(const DiscForm& f, const GroupElem& x, const GroupElem& y);
QZ eval_b(const QuadForm& f, const GroupElem& x, const GroupElem& y);
QZ eval_q(const QuadForm& f, const GroupElem& x);

DiscForm boundary(const QuadForm& q);

DiscForm direct_sum(const DiscForm& a, const DiscForm& b);
QuadForm direct_sum(const QuadForm& a, const QuadForm& b);

/// n·f pointwise.
DiscForm scale_form(const DiscForm& f, std::int64_t n);
QuadForm scale_form(const QuadForm& f, std::int64_t n);

/// (M ⊗ q)(g_1,…,g_n) = Σ m_ii q(g_i) + Σ_{i<j} m_ij dq(g_i, g_j) on G^n.
/// M must be symmetric; the result depends on M only mod 2·exp(G) (for q),
/// mod exp(G) (for b).
DiscForm tensor_matrix(const std::vector<std::vector<std::int64_t>>& M, const DiscForm& f);
QuadForm tensor_matrix(const std::vector<std::vector<std::int64_t>>& M, const QuadForm& f);

struct Subgroup {
    std::vector<GroupElem> generators;
    std::int64_t order = 1;
};

/// Order of the subgroup generated by gens (closure enumeration; desk scale).
std::int64_t span_order(const FinAbGroup& g, const std::vector<GroupElem>& gens);

/// Group order when it is <= limit, nullopt otherwise.  Never overflows.
std::optional<std::int64_t> order_bounded(const FinAbGroup& g, std::int64_t limit);

/// rad(b) = {x : b(x,y) = 0 for all y}.  Full enumeration when |G| <= 4096,
/// Smith-style elimination over each Z/p^R above that.
Subgroup radical(const DiscForm& f);
Subgroup radical(const QuadForm& f);  // radical of the boundary form

bool is_nondegenerate(const DiscForm& f);
bool is_nondegenerate(const QuadForm& f);

struct QuotientResult {
    QuadForm form;                // induced form on G/rad; trivial when !descends
    bool descends = false;        // true iff q vanishes on rad(dq)
    std::vector<GroupElem> reps;  // lift of each quotient generator into G
};

/// Quotient by rad(dq).  q restricted to the radical is a homomorphism, so
/// triviality is checked on generators; when it fails the induced form does
/// not exist and descends = false (form/reps are then trivial/empty).
QuotientResult quotient_by_radical(const QuadForm& q);

/// Quadratic refinement of a non-degenerate b: q with dq = b exactly on the
/// same generators.  Fails on degenerate input.  (Defined with the
/// decomposition machinery.)
QuadForm lift_quadratic(const DiscForm& b);

}  // namespace tyind
