#ifndef TRANSONIC_QUADRATURE_HPP
#define TRANSONIC_QUADRATURE_HPP

#include <cmath>
#include <vector>

#include "transonic/errors.hpp"

namespace transonic {

// Gauss-Legendre nodes/weights on (-1, 1), by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

// Quadrature on (0,1) for integrals with the cylindrical measure r dr:
// sum w_q f(r_q) ~= int_0^1 f(r) r dr. The factor r is folded into w_q.
struct WeightedQuadrature {
    std::vector<double> r;
    std::vector<double> w;
    int order = 0;

    double integrate(const std::vector<double>& f) const {
        if (f.size() != r.size()) throw DimensionMismatch("WeightedQuadrature::integrate: size mismatch");
        double s = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q) s += w[q] * f[q];
        return s;
    }
};

inline WeightedQuadrature quadrature_rule(int Q) {
    if (Q < 8) throw ValidationError("quadrature_rule: Q must be at least 8");
    std::vector<double> xi, wi;
    gauss_legendre(Q, xi, wi);
    WeightedQuadrature quad;
    quad.order = Q;
    quad.r.resize(Q);
    quad.w.resize(Q);
    for (int q = 0; q < Q; ++q) {
        const double r = 0.5 * (xi[q] + 1.0);
        quad.r[q] = r;
        quad.w[q] = 0.5 * wi[q] * r;
    }
    return quad;
}

} // namespace transonic

#endif
