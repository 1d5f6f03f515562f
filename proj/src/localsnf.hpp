#pragma once

// Smith-style elimination over the local ring Z/p^R.  Every nonzero element is
// p^v * unit, so a minimal-valuation pivot divides the whole remaining block
// and elimination needs no coefficient growth beyond mod-p^R arithmetic.

#include <cstdint>
#include <vector>

namespace tyind::snf {

using Mat = std::vector<std::vector<std::int64_t>>;

Mat identity(int n);
Mat mat_mul(const Mat& a, const Mat& b, std::int64_t mod);

/// Inverse of a square matrix whose determinant is a unit mod `mod`
/// (mod = p^R; Gauss-Jordan with unit pivots).
Mat mat_inv(const Mat& a, std::int64_t mod);

struct LocalSNF {
    Mat u, uinv;            // n×n with u*uinv = I mod p^R
    Mat v;                  // m×m, unimodular mod p^R
    std::vector<int> diag;  // diag[k] = c_k where (U C V)_kk = p^{c_k}; c_k = R encodes 0
};

/// U C V = diag(p^{c_0}, p^{c_1}, ...) mod p^R for an n×m matrix C.
LocalSNF local_snf(Mat c, std::int64_t p, int r);

}  // namespace tyind::snf
