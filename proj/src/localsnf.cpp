#include "localsnf.hpp"

#include <algorithm>
#include <utility>

#include "tyind/numtheory.hpp"
#include "tyind/rational.hpp"

namespace tyind::snf {

Mat identity(int n) {
    Mat m(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

Mat mat_mul(const Mat& a, const Mat& b, std::int64_t mod) {
    int n = int(a.size()), k = int(b.size()), m = k ? int(b[0].size()) : 0;
    Mat out(n, std::vector<std::int64_t>(m, 0));
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (int j = 0; j < m; ++j)
                out[i][j] = (out[i][j] + mul_mod(a[i][t], b[t][j], mod)) % mod;
        }
    return out;
}

Mat mat_inv(const Mat& a, std::int64_t mod) {
    int n = int(a.size());
    Mat w = a, inv = identity(n);
    for (auto& row : w)
        for (auto& x : row) x = mod_reduce(x, mod);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (gcd64(w[i][col], mod) == 1) {
                piv = i;
                break;
            }
        if (piv < 0) fail("mat_inv: matrix not invertible");
        std::swap(w[piv], w[col]);
        std::swap(inv[piv], inv[col]);
        std::int64_t s = inv_mod(w[col][col], mod);
        for (int j = 0; j < n; ++j) {
            w[col][j] = mul_mod(w[col][j], s, mod);
            inv[col][j] = mul_mod(inv[col][j], s, mod);
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || w[i][col] == 0) continue;
            std::int64_t f = w[i][col];
            for (int j = 0; j < n; ++j) {
                w[i][j] = mod_reduce(w[i][j] - mul_mod(f, w[col][j], mod), mod);
                inv[i][j] = mod_reduce(inv[i][j] - mul_mod(f, inv[col][j], mod), mod);
            }
        }
    }
    return inv;
}

namespace {

int val_of(std::int64_t x, std::int64_t p, int r) {
    if (x == 0) return r;
    int v = vp(x, p);
    return v > r ? r : v;
}

}  // namespace

LocalSNF local_snf(Mat c, std::int64_t p, int r) {
    std::int64_t mod = checked_pow(p, r);
    int n = int(c.size()), m = n ? int(c[0].size()) : 0;
    for (auto& row : c)
        for (auto& x : row) x = mod_reduce(x, mod);

    LocalSNF out;
    out.u = identity(n);
    out.uinv = identity(n);
    out.v = identity(m);
    int steps = std::min(n, m);
    out.diag.assign(steps, r);

    for (int k = 0; k < steps; ++k) {
        // Minimal-valuation pivot in the remaining block.
        int bi = -1, bj = -1, bv = r;
        for (int i = k; i < n; ++i)
            for (int j = k; j < m; ++j) {
                int v = val_of(c[i][j], p, r);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;  // remaining block is zero; diag stays at r
        out.diag[k] = bv;

        if (bi != k) {
            std::swap(c[bi], c[k]);
            std::swap(out.u[bi], out.u[k]);
            for (int i = 0; i < n; ++i) std::swap(out.uinv[i][bi], out.uinv[i][k]);
        }
        if (bj != k) {
            for (int i = 0; i < n; ++i) std::swap(c[i][bj], c[i][k]);
            for (int i = 0; i < m; ++i) std::swap(out.v[i][bj], out.v[i][k]);
        }

        // Scale the pivot row so the pivot becomes exactly p^bv.
        std::int64_t unit = c[k][k] / checked_pow(p, bv);
        std::int64_t s = inv_mod(unit, mod);
        for (int j = 0; j < m; ++j) c[k][j] = mul_mod(c[k][j], s, mod);
        for (int j = 0; j < n; ++j) out.u[k][j] = mul_mod(out.u[k][j], s, mod);
        std::int64_t sinv = mod_reduce(unit, mod);
        for (int i = 0; i < n; ++i) out.uinv[i][k] = mul_mod(out.uinv[i][k], sinv, mod);

        std::int64_t piv = checked_pow(p, bv);
        for (int i = k + 1; i < n; ++i) {
            if (c[i][k] == 0) continue;
            std::int64_t f = c[i][k] / piv;  // divisible: pivot has minimal valuation
            for (int j = 0; j < m; ++j)
                c[i][j] = mod_reduce(c[i][j] - mul_mod(f, c[k][j], mod), mod);
            for (int j = 0; j < n; ++j)
                out.u[i][j] = mod_reduce(out.u[i][j] - mul_mod(f, out.u[k][j], mod), mod);
            for (int j = 0; j < n; ++j)
                out.uinv[j][k] = mod_reduce(out.uinv[j][k] + mul_mod(f, out.uinv[j][i], mod), mod);
        }
        for (int j = k + 1; j < m; ++j) {
            if (c[k][j] == 0) continue;
            std::int64_t f = c[k][j] / piv;
            for (int i = 0; i < n; ++i)
                c[i][j] = mod_reduce(c[i][j] - mul_mod(f, c[i][k], mod), mod);
            for (int i = 0; i < m; ++i)
                out.v[i][j] = mod_reduce(out.v[i][j] - mul_mod(f, out.v[i][k], mod), mod);
        }
    }
    return out;
}

}  // namespace tyind::snf
