#ifndef TRANSONIC_MANUFACTURED_HPP
#define TRANSONIC_MANUFACTURED_HPP

#include <cmath>
#include <memory>
#include <vector>

#include "transonic/background.hpp"
#include "transonic/field.hpp"
#include "transonic/linear_solver.hpp"

namespace transonic {

// Manufactured solution for convergence studies of the linear solver on the
// background coefficient fields: psi*(x, r) = q(x) cos(pi r) with
// q(x) = x^2/2 - x^4/12 - 5/12. The profile vanishes at the inflow, has
// homogeneous second derivative at both ends (compatible with the boundary
// rows of the dissipative system) and nonvanishing third derivative, so the
// discretization error carries a genuine h^2 signal.
struct ManufacturedCase {
    CoefficientSet co;           // background coefficients with F0 filled in
    std::vector<double> exact;   // M * Q samples of psi*
};

inline double manufactured_q(double x) { return x * x / 2.0 - x * x * x * x / 12.0 - 5.0 / 12.0; }
inline double manufactured_dq(double x) { return x - x * x * x / 3.0; }
inline double manufactured_d2q(double x) { return 1.0 - x * x; }

inline ManufacturedCase manufactured_case(const BackgroundFlow1D& flow,
                                          std::shared_ptr<const RadialBasis> basis) {
    ManufacturedCase mc;
    mc.co = background_coefficient_set(flow, std::move(basis));
    const int M = mc.co.M(), Q = mc.co.Q();
    mc.exact.resize(static_cast<std::size_t>(M) * Q);
    for (int i = 0; i < M; ++i) {
        const double x = flow.grid.x(i);
        const std::size_t off = static_cast<std::size_t>(i) * Q;
        for (int q = 0; q < Q; ++q) {
            const double r = mc.co.basis->quad.r[q];
            const double c = std::cos(M_PI * r);
            const double lap = -M_PI * M_PI * c - M_PI * std::sin(M_PI * r) / r;
            mc.co.F0[off + q] = flow.k11[i] * manufactured_d2q(x) * c +
                                flow.k1[i] * manufactured_dq(x) * c + manufactured_q(x) * lap;
            mc.exact[off + q] = manufactured_q(x) * c;
        }
    }
    return mc;
}

// L2r error of a solve against the modal projection of the exact solution
inline double manufactured_error(const Field2D& psi, const ManufacturedCase& mc) {
    const Field2D ref = field_from_samples(psi.grid, psi.basis, mc.exact);
    const Field2D diff = field_axpy(-1.0, ref, psi);
    return weighted_norms(diff, 0).l2r;
}

} // namespace transonic

#endif
