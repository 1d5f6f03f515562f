#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tyind/forms.hpp"

namespace tyind {

using IMat = std::vector<std::vector<std::int64_t>>;

/// Elementary operation on an ordered generating set.  As column operations on
/// the generator matrix:
///   Flip(i,j):   swap f_i and f_j
///   Add(r,j->i): f_i += r * f_j   (i != j)
///   Scale(r,i):  f_i *= r         (valid only with r coprime to ord(f_i))
/// On a gram matrix this is A -> S^t A S for the op's elementary matrix S.
struct RowColOp {
    enum class Kind { Flip, Add, Scale };
    Kind kind;
    int i = 0;
    int j = 0;            // Add source; Flip partner; unused for Scale
    std::int64_t r = 1;   // Add multiplier / Scale unit
};

QZMat apply_rowcol(const QZMat& gram, const RowColOp& op);

/// An op is valid iff the transformed generators again give a direct-sum
/// decomposition of G: they must generate (mod-p row rank per prime) and the
/// product of their orders must equal |G| (compared as per-prime valuation
/// sums).  Flips are always valid.  gens[a][j] = coordinate of f_j on factor a.
bool validity_check(const FinAbGroup& g, const IMat& gens, const RowColOp& op);

/// One irreducible block:
///   odd p:  A (unit square class) or B (non-residue class) on Z/p^r
///   p = 2:  A/B/C/D = x^2 * (1/-1/5/-5) / 2^{r+1} on Z/2^r,
///           E (hyperbolic) or F (hexagonal) on (Z/2^r)^2.
struct IrreducibleBlock {
    char tag;
    std::int64_t p;
    int r;
    bool operator==(const IrreducibleBlock&) const = default;
};

void check_block(const IrreducibleBlock& b);            // fails outside the table
int block_rank(const IrreducibleBlock& b);             // 2 for E/F, else 1
DiscForm block_bilinear(const IrreducibleBlock& b);    // Table gram
QuadForm block_quadratic(const IrreducibleBlock& b);   // Table quadratic data
std::string block_name(const IrreducibleBlock& b);     // "A8", "E4", ...

struct Decomposition {
    std::vector<IrreducibleBlock> blocks;  // in basis order
    IMat basis_change;                     // column j = new generator f_j
    std::vector<RowColOp> ops;             // provenance; every op passed validity
};

/// Orthogonal decomposition of a non-degenerate form into irreducible blocks.
/// The final generators' gram (and q-values, for quadratic input) equal the
/// blocks' table data exactly; degenerate input is rejected.
Decomposition wall_decompose(const DiscForm& f);
Decomposition wall_decompose(const QuadForm& f);

/// Diagonalize a symmetric QZ matrix with odd-p-power denominators by
/// congruence: S^t A S = diag(eps_j / p^{r_j}) with eps_j in {1, u_p, 0} and
/// S invertible mod p.  Degenerate input allowed (zero entries).
std::pair<IMat, std::vector<QZ>> diagonalize_odd(const QZMat& a, std::int64_t p);

struct TwoAdicBlocks {
    IMat s;                                  // S invertible mod 2
    QZMat gram;                              // S^t A S, block diagonal
    std::vector<std::pair<int, int>> blocks; // (position, size 1 or 2)
};

/// Block-diagonalize a symmetric QZ matrix with 2-power denominators:
/// 1x1 blocks normalized to delta/2^r with delta in {0, 1, -1, 5, -5} (read
/// mod 2^min(r,3)); 2x2 blocks left as 2^{-r}((2a, b),(b, 2c)) with b odd.
TwoAdicBlocks block_diagonalize_two(const QZMat& a);

/// The two three-congruence systems used for rank-2 normalization, named by
/// the standard form each transforms: substituting x -> xS into the standard
/// coefficient triple must hit the targets (A, B, C) mod 2^n.
///   Hexagonal:  (x1^2 + x1x2 + x2^2)-shape; requires A, B, C all odd.
///   Hyperbolic: (x1x2)-shape; requires B odd, A*C even.
enum class HenselSystem { Hexagonal, Hyperbolic };

/// Bit-by-bit lift from the mod-2 seed (I, resp. ((A,1),(1,C))); the rank-3
/// Jacobian condition is verified at the seed and the result is checked by
/// substitution at the final modulus.
IMat hensel_lift(HenselSystem sys, std::int64_t a, std::int64_t b, std::int64_t c, int n);

struct Rank2Result {
    IrreducibleBlock block;  // E_{2^r} or F_{2^r}
    IMat witness;            // T with T^t * gram * T = table gram exactly
};

/// Classify an indecomposable 2-adic 2x2 block 2^{-r}((2a, b),(b, 2c)), b odd:
/// hyperbolic (E) iff a*c is even, hexagonal (F) otherwise.
Rank2Result normalize_rank2(const QZMat& block);

}  // namespace tyind
