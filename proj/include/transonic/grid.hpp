#ifndef TRANSONIC_GRID_HPP
#define TRANSONIC_GRID_HPP

#include <cstddef>
#include <vector>

#include "transonic/errors.hpp"

namespace transonic {

// Uniform grid on [a, b] with n nodes (n >= 2).
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    int n = 2;

    Grid1D() = default;
    Grid1D(double a_, double b_, int n_) : a(a_), b(b_), n(n_) {
        if (n < 2 || !(b > a)) throw ValidationError("Grid1D: need n >= 2 and b > a");
    }
    double h() const { return (b - a) / (n - 1); }
    double x(int i) const { return a + i * h(); }
    std::vector<double> nodes() const {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = x(i);
        return v;
    }
};

// Fornberg's algorithm: weights of the m-th derivative at point z from
// samples at arbitrary nodes x[0..n-1]. Returns w such that
// f^(m)(z) ~= sum_i w[i] f(x[i]).
inline std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
    const int n = static_cast<int>(x.size());
    if (n < m + 1) throw DimensionMismatch("fd_weights: stencil too small for derivative order");
    // c[k][i]: weight of node i for the k-th derivative
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c[m];
}

// m-th derivative of a uniformly sampled function, 4th-order accurate,
// with one-sided stencils near the ends.
inline std::vector<double> fd_derivative(const std::vector<double>& f, double h, int m) {
    const int n = static_cast<int>(f.size());
    const int w = m + 4; // stencil size: accuracy >= 4
    if (n < w) throw InsufficientResolution("fd_derivative: grid too small for requested accuracy");
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        int lo = i - (w - 1) / 2;
        if (lo < 0) lo = 0;
        if (lo + w > n) lo = n - w;
        std::vector<double> xs(w);
        for (int k = 0; k < w; ++k) xs[k] = (lo + k - i) * h;
        const std::vector<double> wt = fd_weights(0.0, xs, m);
        double s = 0.0;
        for (int k = 0; k < w; ++k) s += wt[k] * f[lo + k];
        out[i] = s;
    }
    return out;
}

// Quadrature weights for a uniform grid: 4th-order end-corrected trapezoid
// (Gregory rule). Valid for n >= 8.
inline std::vector<double> gregory_weights(int n, double h) {
    if (n < 8) throw InsufficientResolution("gregory_weights: need at least 8 nodes");
    std::vector<double> w(n, h);
    const double c0 = 3.0 / 8.0, c1 = 7.0 / 6.0, c2 = 23.0 / 24.0;
    w[0] = c0 * h; w[1] = c1 * h; w[2] = c2 * h;
    w[n - 1] = c0 * h; w[n - 2] = c1 * h; w[n - 3] = c2 * h;
    return w;
}

// Cubic (4-point) Lagrange interpolation of uniformly sampled data.
inline double interp_uniform(const std::vector<double>& f, double a, double h, double z) {
    const int n = static_cast<int>(f.size());
    if (n < 4) throw InsufficientResolution("interp_uniform: need at least 4 nodes");
    int i = static_cast<int>((z - a) / h) - 1;
    if (i < 0) i = 0;
    if (i > n - 4) i = n - 4;
    double num[4], result = 0.0;
    for (int k = 0; k < 4; ++k) num[k] = a + (i + k) * h;
    for (int k = 0; k < 4; ++k) {
        double lk = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != k) lk *= (z - num[j]) / (num[k] - num[j]);
        result += lk * f[i + k];
    }
    return result;
}

// Smooth monotone step: 0 for t<=0, 1 for t>=1, C^4 at both junctions.
inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double t5 = t * t * t * t * t;
    return t5 * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + t * 70.0))));
}
inline double smoothstep_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double t4 = t * t * t * t;
    return t4 * (630.0 + t * (-2520.0 + t * (3780.0 + t * (-2520.0 + t * 630.0))));
}
inline double smoothstep_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double t3 = t * t * t;
    return t3 * (2520.0 + t * (-12600.0 + t * (22680.0 + t * (-17640.0 + t * 5040.0))));
}

} // namespace transonic

#endif
