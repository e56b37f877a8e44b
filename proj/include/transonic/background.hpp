#ifndef TRANSONIC_BACKGROUND_HPP
#define TRANSONIC_BACKGROUND_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/force.hpp"
#include "transonic/grid.hpp"

namespace transonic {

// Bernoulli root function: F(x1, t) = t^2/2 + g(t) - int_{L0}^{x1} f - B0,
// where g(t) = gamma J^(gamma-1) / ((gamma-1) t^(gamma-1)) is the enthalpy
// expressed through t = |u| at constant mass flux J.
inline double bernoulli_F(const GasConfig& gas, const ForceModel& force, double x1, double t) {
    const double g = gas.gamma, J = gas.J();
    return 0.5 * t * t + g * std::pow(J, g - 1.0) / ((g - 1.0) * std::pow(t, g - 1.0)) -
           force.integral(gas.L0, x1) - gas.B0();
}

inline double bernoulli_dFdt(const GasConfig& gas, double t) {
    const double g = gas.gamma, J = gas.J();
    return t - g * std::pow(J, g - 1.0) * std::pow(t, -g);
}

namespace detail {

// root of F(x1, .) on a monotone branch by bisection; [lo, hi] must bracket
inline double bisect_branch(const GasConfig& gas, const ForceModel& force, double x1,
                            double lo, double hi) {
    double flo = bernoulli_F(gas, force, x1, lo);
    double fhi = bernoulli_F(gas, force, x1, hi);
    if (flo * fhi > 0.0) throw RootBracketFailure("bernoulli root: bracket does not change sign");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bernoulli_F(gas, force, x1, mid);
        if (flo * fm <= 0.0) { hi = mid; fhi = fm; } else { lo = mid; flo = fm; }
        if (hi - lo < 1e-16 * hi) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

// the two Bernoulli roots bracketing the sonic speed, for x1 != 0
inline std::pair<double, double> bernoulli_roots(double x1, const GasConfig& gas,
                                                 const ForceModel& force) {
    const double cs = sonic_speed(gas.J(), gas.gamma);
    const double Fmin = bernoulli_F(gas, force, x1, cs);
    if (Fmin > 1e-13 * gas.B0())
        throw NoRoot("bernoulli_roots: Bernoulli function positive at its minimum");
    double lo = cs * 1e-3;
    while (bernoulli_F(gas, force, x1, lo) < 0.0) {
        lo *= 0.5;
        if (lo < 1e-300) throw RootBracketFailure("bernoulli_roots: no subsonic bracket");
    }
    const double t_sub = detail::bisect_branch(gas, force, x1, lo, cs);
    double hi = 2.0 * cs;
    int widen = 0;
    while (bernoulli_F(gas, force, x1, hi) < 0.0) {
        hi *= 2.0;
        if (++widen > 60) throw RootBracketFailure("bernoulli_roots: no supersonic bracket");
    }
    const double t_sup = detail::bisect_branch(gas, force, x1, cs, hi);
    return {t_sub, t_sup};
}

struct BackgroundFlow1D {
    GasConfig gas;
    ForceModel force;
    Grid1D grid;
    SonicClassification classification;
    double J = 0.0, c_star = 0.0, B0 = 0.0;
    double delta_switch = 0.0;
    std::vector<double> u, rho, c2, du, k11, k1;

    // pointwise velocity, independent of the grid (used by the sonic front)
    double velocity_at(double x1) const {
        if (x1 == 0.0) return c_star;
        if (classification.kind == SonicCase::positive_accel && std::abs(x1) < delta_switch) {
            // desingularized form u = c_star + x1 y, Newton from the exact slope.
            // The Bernoulli function is evaluated in a cancellation-free form:
            // F(x1, c_star) = -int_0^{x1} f by the sonic calibration, and the
            // O(x1) parts of the kinetic and enthalpy differences from the
            // sonic state cancel analytically through expm1/log1p.
            const double ga = gas.gamma;
            const double I = force.integral(0.0, x1);
            double y = classification.leading_coefficient;
            for (int it = 0; it < 60; ++it) {
                const double xy = x1 * y;
                const double g = 0.5 * xy * (2.0 * c_star + xy) +
                                 c_star * c_star / (ga - 1.0) *
                                     std::expm1((1.0 - ga) * std::log1p(xy / c_star)) -
                                 I;
                const double dg = x1 * bernoulli_dFdt(gas, c_star + xy);
                if (dg == 0.0) break;
                const double dy = g / dg;
                y -= dy;
                if (std::abs(dy) <= 1e-15 * (std::abs(y) + 1.0)) break;
                if (!(std::abs(y) < 1e6)) throw NewtonDivergence("background velocity: Newton diverged near the sonic point");
            }
            return c_star + x1 * y;
        }
        const auto roots = bernoulli_roots(x1, gas, force);
        return x1 < 0.0 ? roots.first : roots.second;
    }

    double sound_speed2_at(double x1) const {
        const double t = velocity_at(x1);
        return gas.gamma * std::pow(J / t, gas.gamma - 1.0);
    }

    // u' from the implicit relation (c^2 - u^2) u' + f u = 0; near the sonic
    // point the removable singularity is patched by the classified slope
    double dvelocity_at(double x1) const {
        const double t = velocity_at(x1);
        const double cc = gas.gamma * std::pow(J / t, gas.gamma - 1.0);
        const double den = t * t - cc;
        if (std::abs(den) < 1e-9 * cc) {
            if (classification.kind == SonicCase::positive_accel)
                return classification.leading_coefficient;
            return 0.0;
        }
        return force.value(x1) * t / den;
    }
};

// nodal values of the principal coefficient and the first-order coefficient
// of the linearized equation: k11 = (c^2 - u^2)/c^2, k1 = (f - (g+1) u u')/c^2
inline std::pair<std::vector<double>, std::vector<double>>
background_coefficients(const BackgroundFlow1D& flow) {
    const int M = flow.grid.n;
    std::vector<double> k11(M), k1(M);
    for (int i = 0; i < M; ++i) {
        const double x = flow.grid.x(i);
        const double uu = flow.u[i];
        const double cc = flow.c2[i];
        k11[i] = (cc - uu * uu) / cc;
        k1[i] = (flow.force.value(x) - (flow.gas.gamma + 1.0) * uu * flow.du[i]) / cc;
    }
    return {k11, k1};
}

inline BackgroundFlow1D solve_background(const GasConfig& gas, const ForceModel& force, int M,
                                         bool assert_positive_accel = false) {
    gas.validate();
    if (M < 16) throw InsufficientResolution("solve_background: need at least 16 nodes");
    BackgroundFlow1D flow;
    flow.gas = gas;
    flow.force = force;
    flow.grid = Grid1D(gas.L0, gas.L1, M);
    flow.J = gas.J();
    flow.c_star = sonic_speed(flow.J, gas.gamma);
    flow.B0 = gas.B0();
    flow.delta_switch = 10.0 * flow.grid.h();
    if (force.has_derivatives_at_0() || force.kind == ForceKind::sign_jump) {
        flow.classification = classify_sonic_point(force, gas.gamma);
    } else if (assert_positive_accel) {
        flow.classification.kind = SonicCase::positive_accel;
        flow.classification.predicted_exponent = 1.0;
        // slope from a one-sided difference of the force near 0
        const double h = 1e-4 * (gas.L1 - gas.L0);
        flow.classification.leading_coefficient =
            std::sqrt(std::max(0.0, (force.value(h) - force.value(-h)) / (2.0 * h)) / (gas.gamma + 1.0));
    } else {
        throw ClassificationMismatch("solve_background: force kind has no derivative data; assert positive acceleration to proceed");
    }
    if (assert_positive_accel && flow.classification.kind != SonicCase::positive_accel)
        throw ClassificationMismatch("solve_background: force is not a positive-acceleration profile");

    flow.u.resize(M);
    flow.rho.resize(M);
    flow.c2.resize(M);
    flow.du.resize(M);
    for (int i = 0; i < M; ++i) {
        const double x = flow.grid.x(i);
        flow.u[i] = flow.velocity_at(x);
        flow.rho[i] = flow.J / flow.u[i];
        flow.c2[i] = gas.gamma * std::pow(flow.rho[i], gas.gamma - 1.0);
        flow.du[i] = flow.dvelocity_at(x);
    }
    auto [k11, k1] = background_coefficients(flow);
    flow.k11 = std::move(k11);
    flow.k1 = std::move(k1);
    return flow;
}

struct MultiplierCertificate {
    double d0 = 0.0;
    double kappa_star = 0.0;
    std::vector<double> sign_margins;  // j = 0..3, minima of -(2 k1 + (2j-1) k11')
    std::vector<double> shift_margins;  // j = 0..3, minima of (k1 + j k11') d - (k11 d)'/2
};

namespace detail {

inline std::vector<double> shift_margin_minima(const std::vector<double>& k1,
                                          const std::vector<double>& k11,
                                          const std::vector<double>& k11p,
                                          const std::vector<double>& x, double d0, int jmax) {
    std::vector<double> mins(jmax + 1, 1e300);
    for (int j = 0; j <= jmax; ++j)
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = 6.0 * (x[i] - d0);
            const double v = (k1[i] + (j - 0.5) * k11p[i]) * d - 3.0 * k11[i];
            if (v < mins[j]) mins[j] = v;
        }
    return mins;
}

} // namespace detail

inline MultiplierCertificate verify_multiplier(const BackgroundFlow1D& flow,
                                               std::optional<double> d0_opt = std::nullopt) {
    const std::vector<double> k11p = fd_derivative(flow.k11, flow.grid.h(), 1);
    const std::vector<double> x = flow.grid.nodes();
    MultiplierCertificate cert;
    cert.sign_margins.assign(4, 1e300);
    for (int j = 0; j <= 3; ++j)
        for (int i = 0; i < flow.grid.n; ++i) {
            const double v = -(2.0 * flow.k1[i] + (2.0 * j - 1.0) * k11p[i]);
            if (v < cert.sign_margins[j]) cert.sign_margins[j] = v;
        }
    cert.kappa_star = 1e300;
    for (double m : cert.sign_margins) cert.kappa_star = std::min(cert.kappa_star, m);
    if (!(cert.kappa_star > 0.0))
        throw NoCertificate("verify_multiplier: damping margin is not positive on the grid");

    auto try_d0 = [&](double d0) {
        cert.shift_margins = detail::shift_margin_minima(flow.k1, flow.k11, k11p, x, d0, 3);
        for (double m : cert.shift_margins)
            if (!(m >= 4.0)) return false;
        return true;
    };
    if (d0_opt) {
        cert.d0 = *d0_opt;
        if (!try_d0(cert.d0))
            throw NoCertificate("verify_multiplier: supplied shift fails the coercivity margin");
        return cert;
    }
    double worst = -1e300;
    for (double d0 = flow.gas.L1 + 0.5; d0 <= flow.gas.L1 + 100.0; d0 += 0.5) {
        if (try_d0(d0)) {
            cert.d0 = d0;
            return cert;
        }
        for (double m : cert.shift_margins) worst = std::max(worst, m - 4.0);
    }
    throw NoCertificate("verify_multiplier: no shift in the search range; worst deficit " +
                        std::to_string(worst));
}

// background data on the doubled cylinder [L0, 2 L1], with the principal and
// damping coefficients blended to constants past the physical outlet
struct ExtendedBackground {
    BackgroundFlow1D flow;  // solved on [L0, L2]
    double L2 = 0.0, l = 0.0;
    double k0 = 0.0;
    double d0 = 0.0;
    std::vector<double> a11, a1;     // blended coefficients on the extended grid
    std::vector<double> zeta1, zeta2;
};

inline ExtendedBackground extend_background(const BackgroundFlow1D& base, double k0_init = 1.0,
                                            std::optional<double> l_opt = std::nullopt) {
    const GasConfig& gas = base.gas;
    const double L1 = gas.L1;
    const double h = base.grid.h();
    // target L2 = 2 L1, snapped to the base grid so the extended nodes
    // continue the original ones exactly
    const int extra = static_cast<int>(std::lround(L1 / h));
    const double L2 = L1 + extra * h;
    const double l = l_opt.value_or(L1 / 20.0);
    // the force profile must stay positive on the added part of the duct
    for (int i = 1; i <= 512; ++i) {
        const double x = L1 + (L2 - L1) * i / 512.0;
        if (!(base.force.value(x) > 0.0))
            throw ExtensionFailure("extend_background: force extension not positive past the outlet");
    }
    ExtendedBackground ext;
    ext.L2 = L2;
    ext.l = l;
    const int M2 = base.grid.n + extra;
    GasConfig gas2 = gas;
    gas2.L1 = L2;
    ext.flow = solve_background(gas2, base.force, M2,
                                base.classification.kind == SonicCase::positive_accel);
    const int n = ext.flow.grid.n;
    ext.a11.resize(n);
    ext.a1.resize(n);
    ext.zeta1.resize(n);
    ext.zeta2.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = ext.flow.grid.x(i);
        // zeta1: 1 below L1+2l, 0 above L1+4l; zeta2: 1 below L1+l, 0 above L1+2l
        ext.zeta1[i] = 1.0 - smoothstep((x - (L1 + 2.0 * l)) / (2.0 * l));
        ext.zeta2[i] = 1.0 - smoothstep((x - (L1 + l)) / l);
        ext.a11[i] = ext.flow.k11[i] * ext.zeta1[i] + (1.0 - ext.zeta1[i]);
    }

    const std::vector<double> x = ext.flow.grid.nodes();
    const std::vector<double> a11p = fd_derivative(ext.a11, h, 1);
    double k0 = k0_init;
    for (int attempt = 0; attempt < 40; ++attempt) {
        for (int i = 0; i < n; ++i)
            ext.a1[i] = ext.flow.k1[i] * ext.zeta2[i] - k0 * (1.0 - ext.zeta2[i]);
        double kappa = 1e300;
        for (int j = 0; j <= 4; ++j)
            for (int i = 0; i < n; ++i)
                kappa = std::min(kappa, -(2.0 * ext.a1[i] + (2.0 * j - 1.0) * a11p[i]));
        bool ok = kappa > 0.0;
        double d0_found = 0.0;
        if (ok) {
            ok = false;
            for (double d0 = L2 + 0.5; d0 <= L2 + 100.0; d0 += 0.5) {
                const std::vector<double> mins =
                    detail::shift_margin_minima(ext.a1, ext.a11, a11p, x, d0, 3);
                bool all = true;
                for (double m : mins)
                    if (!(m >= 4.0)) { all = false; break; }
                if (all) { ok = true; d0_found = d0; break; }
            }
        }
        if (ok) {
            ext.k0 = k0;
            ext.d0 = d0_found;
            return ext;
        }
        k0 *= 2.0;
    }
    throw ExtensionFailure("extend_background: no damping constant satisfies the extended margins");
}

} // namespace transonic

#endif
