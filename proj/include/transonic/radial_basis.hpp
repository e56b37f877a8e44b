#ifndef TRANSONIC_RADIAL_BASIS_HPP
#define TRANSONIC_RADIAL_BASIS_HPP

#include <cmath>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/quadrature.hpp"

namespace transonic {

inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }
inline double bessel_j1(double x) {
    const double v = std::cyl_bessel_j(1.0, std::abs(x));
    return x < 0.0 ? -v : v;
}

// Positive zeros of J1 by bracketed bisection plus Newton polish.
// J1'(x) = J0(x) - J1(x)/x.
inline std::vector<double> bessel_j1_zeros(int count) {
    std::vector<double> zeros;
    zeros.reserve(count);
    for (int k = 1; k <= count; ++k) {
        // zeros of J1 are close to (k + 1/4) pi
        double lo = (k + 0.25) * M_PI - 0.5 * M_PI;
        double hi = (k + 0.25) * M_PI + 0.5 * M_PI;
        double flo = bessel_j1(lo), fhi = bessel_j1(hi);
        int widen = 0;
        while (flo * fhi > 0.0) {
            lo -= 0.1; hi += 0.1;
            flo = bessel_j1(lo); fhi = bessel_j1(hi);
            if (++widen > 20) throw RootBracketFailure("bessel_j1_zeros: no sign change in bracket");
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = bessel_j1(mid);
            if (flo * fm <= 0.0) { hi = mid; fhi = fm; } else { lo = mid; flo = fm; }
            if (hi - lo < 1e-12) break;
        }
        double z = 0.5 * (lo + hi);
        for (int it = 0; it < 8; ++it) {
            const double f = bessel_j1(z);
            const double df = bessel_j0(z) - f / z;
            const double dz = f / df;
            z -= dz;
            if (std::abs(dz) < 1e-15 * z) break;
        }
        zeros.push_back(z);
    }
    return zeros;
}

// Eigenvalues of -b'' - b'/r = lambda b on [0,1] with b'(0)=b'(1)=0.
// lambda_1 = 0 (constant mode); sqrt(lambda_j) is the (j-1)-th positive
// zero of J1 for j >= 2.
inline std::vector<double> find_eigenvalues(int N) {
    if (N < 1) throw ValidationError("find_eigenvalues: N must be positive");
    std::vector<double> lam(N, 0.0);
    if (N > 1) {
        const std::vector<double> z = bessel_j1_zeros(N - 1);
        for (int j = 1; j < N; ++j) lam[j] = z[j - 1] * z[j - 1];
    }
    return lam;
}

// Orthonormal Neumann eigenbasis b_j(r) = c_j J0(sqrt(lambda_j) r) on [0,1],
// sampled at the weighted quadrature nodes, together with radial derivative
// samples up to 4th order (from J0' = -J1 and the eigen-ODE).
struct RadialBasis {
    int N = 0;
    WeightedQuadrature quad;
    std::vector<double> lambda;  // ascending, lambda[0] = 0
    std::vector<double> k;       // sqrt(lambda)
    std::vector<double> c;       // normalization constants
    // sample arrays, index [j * Q + q]
    std::vector<double> b, d1, d2, d3, d4;
    // singular-operator samples: s0 = b'/r, s1 = (b'/r)', s2 = (b'/r)'',
    // ss = (1/r)(b'/r)'
    std::vector<double> s0, s1, s2, ss;

    int Q() const { return quad.order; }

    double value_at(int j, double r) const { return c[j] * bessel_j0(k[j] * r); }
    double deriv_at(int j, double r) const { return -c[j] * k[j] * bessel_j1(k[j] * r); }
    double deriv2_at(int j, double r) const {
        if (r <= 0.0) return -0.5 * lambda[j] * c[j]; // limit from the ODE
        return -deriv_at(j, r) / r - lambda[j] * value_at(j, r);
    }
    double value_at0(int j) const { return c[j]; }
    double value_at1(int j) const { return c[j] * bessel_j0(k[j]); }
};

inline RadialBasis build_basis(int N, int Q) {
    if (Q < 4 * N) throw ValidationError("build_basis: need Q >= 4N quadrature nodes");
    RadialBasis basis;
    basis.N = N;
    basis.quad = quadrature_rule(Q);
    basis.lambda = find_eigenvalues(N);
    basis.k.resize(N);
    basis.c.assign(N, 1.0);
    for (int j = 0; j < N; ++j) basis.k[j] = std::sqrt(basis.lambda[j]);

    const auto sz = static_cast<std::size_t>(N) * Q;
    basis.b.assign(sz, 0.0);
    basis.d1.assign(sz, 0.0);
    basis.d2.assign(sz, 0.0);
    basis.d3.assign(sz, 0.0);
    basis.d4.assign(sz, 0.0);
    basis.s0.assign(sz, 0.0);
    basis.s1.assign(sz, 0.0);
    basis.s2.assign(sz, 0.0);
    basis.ss.assign(sz, 0.0);

    for (int j = 0; j < N; ++j) {
        const double kj = basis.k[j];
        const double lam = basis.lambda[j];
        // normalization by the quadrature itself (analytic value
        // sqrt(2)/|J0(k_j)| is cross-checked in tests)
        double nrm2 = 0.0;
        for (int q = 0; q < Q; ++q) {
            const double v = bessel_j0(kj * basis.quad.r[q]);
            nrm2 += basis.quad.w[q] * v * v;
        }
        const double cj = 1.0 / std::sqrt(nrm2);
        basis.c[j] = cj;
        for (int q = 0; q < Q; ++q) {
            const double r = basis.quad.r[q];
            const std::size_t idx = static_cast<std::size_t>(j) * Q + q;
            const double v = cj * bessel_j0(kj * r);
            const double dv = -cj * kj * bessel_j1(kj * r);
            const double d2v = -dv / r - lam * v;
            const double d3v = -d2v / r + dv / (r * r) - lam * dv;
            const double d4v = -d3v / r + 2.0 * d2v / (r * r) - 2.0 * dv / (r * r * r) - lam * d2v;
            basis.b[idx] = v;
            basis.d1[idx] = dv;
            basis.d2[idx] = d2v;
            basis.d3[idx] = d3v;
            basis.d4[idx] = d4v;
            basis.s0[idx] = dv / r;
            basis.s1[idx] = d2v / r - dv / (r * r);
            basis.s2[idx] = d3v / r - 2.0 * d2v / (r * r) + 2.0 * dv / (r * r * r);
            basis.ss[idx] = basis.s1[idx] / r;
        }
    }
    return basis;
}

// Modal coefficients a_j = (f, b_j)_0 from samples at the quadrature nodes.
inline std::vector<double> project(const RadialBasis& basis, const std::vector<double>& samples) {
    const int Q = basis.Q();
    if (static_cast<int>(samples.size()) != Q)
        throw DimensionMismatch("project: sample count must equal quadrature order");
    std::vector<double> a(basis.N, 0.0);
    for (int j = 0; j < basis.N; ++j) {
        double s = 0.0;
        for (int q = 0; q < Q; ++q)
            s += basis.quad.w[q] * samples[q] * basis.b[static_cast<std::size_t>(j) * Q + q];
        a[j] = s;
    }
    return a;
}

inline std::vector<double> reconstruct(const RadialBasis& basis, const std::vector<double>& a) {
    if (static_cast<int>(a.size()) != basis.N)
        throw DimensionMismatch("reconstruct: coefficient count must equal basis size");
    const int Q = basis.Q();
    std::vector<double> f(Q, 0.0);
    for (int j = 0; j < basis.N; ++j)
        for (int q = 0; q < Q; ++q)
            f[q] += a[j] * basis.b[static_cast<std::size_t>(j) * Q + q];
    return f;
}

} // namespace transonic

#endif
