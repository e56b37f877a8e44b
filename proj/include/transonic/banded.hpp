#ifndef TRANSONIC_BANDED_HPP
#define TRANSONIC_BANDED_HPP

#include <cmath>
#include <cstdlib>
#include <vector>

#include "transonic/errors.hpp"

namespace transonic {

// General banded matrix, column-major band storage with room for the
// fill-in produced by partial pivoting: entry (i, j) lives at
// ab[j * ldab + kl + ku + i - j], admissible for -(kl+ku) <= i-j <= kl.
struct BandedMatrix {
    int n = 0, kl = 0, ku = 0;
    int ldab = 0;
    std::vector<double> ab;

    BandedMatrix() = default;
    BandedMatrix(int n_, int kl_, int ku_)
        : n(n_), kl(kl_), ku(ku_), ldab(2 * kl_ + ku_ + 1),
          ab(static_cast<std::size_t>(ldab) * n_, 0.0) {}

    bool in_band(int i, int j) const { return i - j <= kl && j - i <= ku; }

    double& at(int i, int j) {
        if (!in_band(i, j)) throw DimensionMismatch("BandedMatrix::at: entry outside band");
        return ab[static_cast<std::size_t>(j) * ldab + kl + ku + i - j];
    }
    double get(int i, int j) const {
        if (i < 0 || j < 0 || i >= n || j >= n || !in_band(i, j)) return 0.0;
        return ab[static_cast<std::size_t>(j) * ldab + kl + ku + i - j];
    }
    void add(int i, int j, double v) { at(i, j) += v; }

    std::vector<double> multiply(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != n) throw DimensionMismatch("BandedMatrix::multiply: size mismatch");
        std::vector<double> y(n, 0.0);
        for (int j = 0; j < n; ++j) {
            const int lo = std::max(0, j - ku), hi = std::min(n - 1, j + kl);
            for (int i = lo; i <= hi; ++i)
                y[i] += ab[static_cast<std::size_t>(j) * ldab + kl + ku + i - j] * x[j];
        }
        return y;
    }
};

// LU factorization with partial pivoting, in band storage
struct BandedLU {
    int n = 0, kl = 0, ku = 0, ldab = 0;
    std::vector<double> ab;
    std::vector<int> ipiv;

    void solve(std::vector<double>& b) const {
        if (static_cast<int>(b.size()) != n) throw DimensionMismatch("BandedLU::solve: size mismatch");
        const int kv = kl + ku;
        for (int j = 0; j < n; ++j) {
            const int p = ipiv[j];
            if (p != j) std::swap(b[j], b[p]);
            const int km = std::min(kl, n - 1 - j);
            for (int i = 1; i <= km; ++i)
                b[j + i] -= ab[static_cast<std::size_t>(j) * ldab + kv + i] * b[j];
        }
        for (int j = n - 1; j >= 0; --j) {
            b[j] /= ab[static_cast<std::size_t>(j) * ldab + kv];
            const int lo = std::max(0, j - kv);
            for (int i = lo; i < j; ++i)
                b[i] -= ab[static_cast<std::size_t>(j) * ldab + kv + i - j] * b[j];
        }
    }
};

inline BandedLU banded_lu(const BandedMatrix& A) {
    BandedLU lu;
    lu.n = A.n;
    lu.kl = A.kl;
    lu.ku = A.ku;
    lu.ldab = A.ldab;
    lu.ab = A.ab;
    lu.ipiv.assign(A.n, 0);
    const int n = A.n, kl = A.kl, kv = A.kl + A.ku, ldab = A.ldab;
    auto& ab = lu.ab;
    for (int j = 0; j < n; ++j) {
        const int km = std::min(kl, n - 1 - j);
        int jp = 0;
        double pmax = std::abs(ab[static_cast<std::size_t>(j) * ldab + kv]);
        for (int i = 1; i <= km; ++i) {
            const double v = std::abs(ab[static_cast<std::size_t>(j) * ldab + kv + i]);
            if (v > pmax) { pmax = v; jp = i; }
        }
        lu.ipiv[j] = j + jp;
        if (pmax == 0.0) throw SingularMatrix("banded_lu: zero pivot at column " + std::to_string(j));
        const int jhi = std::min(n - 1, j + kv);
        if (jp != 0)
            for (int k = j; k <= jhi; ++k)
                std::swap(ab[static_cast<std::size_t>(k) * ldab + kv + j - k],
                          ab[static_cast<std::size_t>(k) * ldab + kv + j + jp - k]);
        const double piv = ab[static_cast<std::size_t>(j) * ldab + kv];
        for (int i = 1; i <= km; ++i) ab[static_cast<std::size_t>(j) * ldab + kv + i] /= piv;
        for (int k = j + 1; k <= jhi; ++k) {
            const double ajk = ab[static_cast<std::size_t>(k) * ldab + kv + j - k];
            if (ajk != 0.0)
                for (int i = 1; i <= km; ++i)
                    ab[static_cast<std::size_t>(k) * ldab + kv + j + i - k] -=
                        ab[static_cast<std::size_t>(j) * ldab + kv + i] * ajk;
        }
    }
    return lu;
}

} // namespace transonic

#endif
