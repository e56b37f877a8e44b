// End-to-end acceptance gate: one pass/fail line per check, nonzero exit if
// any check fails. Kept independent of the unit suite so it can run alone.
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "transonic/background.hpp"
#include "transonic/fixed_point.hpp"
#include "transonic/linear_solver.hpp"
#include "transonic/manufactured.hpp"
#include "transonic/norms.hpp"
#include "transonic/radial_basis.hpp"

using namespace transonic;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%2d] %s  %s (%s)\n", idx, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

ForceModel demo_force(const GasConfig& gas) {
    ForceModel shape;
    shape.kind = ForceKind::linear;
    return calibrate_force(shape, gas);
}

// J1 by its power series, independent of the library's cylinder functions
double j1_series(double x) {
    double term = 0.5 * x, sum = term;
    for (int k = 1; k <= 40; ++k) {
        term *= -0.25 * x * x / (k * (k + 1.0));
        sum += term;
    }
    return sum;
}

double slope_of_front(const BackgroundFlow1D& flow, int side) {
    std::vector<double> xs, ys;
    for (int k = 0; k < 8; ++k) {
        const double x = 0.01 * std::pow(10.0, k / 7.0);
        xs.push_back(x);
        ys.push_back(std::abs(flow.velocity_at(side * x) - flow.c_star));
    }
    return transonic::detail::loglog_slope(xs, ys);
}

Field2D random_field(const Grid1D& grid, std::shared_ptr<const RadialBasis> basis,
                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field2D f(grid, std::move(basis));
    for (int j = 0; j < f.N(); ++j) {
        const double scale = 1.0 / ((1.0 + f.basis->lambda[j]) * (1.0 + f.basis->lambda[j]));
        const double a = uni(rng), b = uni(rng), w = 1.0 + 2.0 * std::abs(uni(rng));
        for (int i = 0; i < f.M(); ++i) {
            const double x = grid.x(i);
            f.a(i, j) = scale * (a * std::cos(w * x) + b * std::sin(w * x));
        }
    }
    return f;
}

} // namespace

int main() {
    const GasConfig gas;
    const ForceModel force = demo_force(gas);
    const BackgroundFlow1D flow160 = solve_background(gas, force, 160);

    // 1: the two Bernoulli branches at the outlet (gamma = 2: t^3 - 5t + 4 = 0)
    {
        const auto roots = bernoulli_roots(1.0, gas, force);
        const double e1 = std::abs(roots.first - 1.0);
        const double e2 = std::abs(roots.second - 0.5 * (std::sqrt(17.0) - 1.0));
        report(1, e1 <= 1e-12 && e2 <= 1e-12, "outlet Bernoulli roots",
               fmt("dev %.2e / %.2e", e1, e2));
    }

    // 2: sonic speed and the sonic slope from h-refined one-sided differences
    {
        const double e_cs = std::abs(flow160.c_star - std::cbrt(2.0));
        const double nu_exact = std::sqrt(force.amplitude / 3.0);
        double worst = 0.0;
        for (int side : {+1, -1}) {
            // three one-sided slopes, Richardson-extrapolated to h -> 0
            double D[3];
            for (int k = 0; k < 3; ++k) {
                const double h = side * 1e-2 / (1 << k);
                D[k] = (flow160.velocity_at(h) - flow160.c_star) / h;
            }
            const double R1 = 2.0 * D[1] - D[0], R2 = 2.0 * D[2] - D[1];
            const double nu = (4.0 * R2 - R1) / 3.0;
            worst = std::max(worst, std::abs(nu - nu_exact));
        }
        report(2, e_cs <= 1e-12 && worst <= 1e-6, "sonic speed and acceleration",
               fmt("c* dev %.2e, slope dev %.2e", e_cs, worst));
    }

    // 3: mass flux and Bernoulli invariants along the solved flow
    {
        double worst = 0.0;
        for (int M : {160, 320, 640}) {
            const BackgroundFlow1D f = solve_background(gas, force, M);
            for (int i = 0; i < M; ++i) {
                const double x = f.grid.x(i);
                const double phi = f.force.integral(f.gas.L0, x);
                worst = std::max(worst, std::abs(f.rho[i] * f.u[i] - f.J));
                worst = std::max(worst, std::abs(0.5 * f.u[i] * f.u[i] +
                                                 f.c2[i] / (gas.gamma - 1.0) - phi - f.B0));
            }
        }
        report(3, worst <= 1e-10, "conserved quantities under refinement", fmt("dev %.2e", worst));
    }

    // 4: multiplier certificate margins
    {
        bool ok = true;
        double worst_sign = 1e300, worst_shift = 1e300;
        try {
            const MultiplierCertificate cert = verify_multiplier(flow160);
            for (double m : cert.sign_margins) worst_sign = std::min(worst_sign, m);
            for (double m : cert.shift_margins) worst_shift = std::min(worst_shift, m);
            ok = worst_sign > 0.0 && worst_shift >= 4.0;
        } catch (const Error&) {
            ok = false;
        }
        report(4, ok, "multiplier margins", fmt("sign %.3f, shift %.3f", worst_sign, worst_shift));
    }

    // 5: radial eigenvalues against an independent series oracle; orthonormality
    {
        double lo = 3.0, hi = 4.5, flo = j1_series(lo);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = j1_series(mid);
            if (flo * fm <= 0.0) hi = mid; else { lo = mid; flo = fm; }
        }
        const double z_oracle = 0.5 * (lo + hi);
        const RadialBasis B = build_basis(16, 128);
        const double e_lam = std::abs(std::sqrt(B.lambda[1]) - z_oracle);
        const double e_ref = std::abs(z_oracle - 3.8317059702);
        double gram = 0.0;
        for (int i = 0; i < B.N; ++i)
            for (int j = 0; j < B.N; ++j) {
                double s = 0.0;
                for (int q = 0; q < B.Q(); ++q)
                    s += B.quad.w[q] * B.b[static_cast<std::size_t>(i) * B.Q() + q] *
                         B.b[static_cast<std::size_t>(j) * B.Q() + q];
                gram = std::max(gram, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        report(5, e_lam <= 1e-8 && e_ref <= 1e-8 && gram <= 1e-10,
               "radial eigenbasis", fmt("eig dev %.2e, gram dev %.2e", std::max(e_lam, e_ref), gram));
    }

    // 6 + 7 + 8 share the manufactured refinement triple at N = 16
    const auto basis16 = std::make_shared<RadialBasis>(build_basis(16, 64));
    std::vector<double> mfg_errs, mfg_ratios;
    Field2D psi200;
    BackgroundFlow1D flow200;
    CoefficientSet co200;
    bool sched_ok = true;
    double sched_change = 1e300;
    for (int M : {100, 200, 400}) {
        const BackgroundFlow1D f = solve_background(gas, force, M);
        const double d0 = verify_multiplier(f).d0;
        const ManufacturedCase mc = manufactured_case(f, basis16);
        const auto [psi, cert] = solve_linear(mc.co, SigmaSchedule{}, d0);
        sched_ok = sched_ok && cert.converged;
        double last_change = 1e300;
        for (const SigmaLevel& lv : cert.levels)
            if (lv.accepted && lv.change >= 0.0) last_change = lv.change;
        sched_change = std::min(sched_change, last_change);
        mfg_errs.push_back(manufactured_error(psi, mc));
        mfg_ratios.push_back(cert.energy_ratio);
        if (M == 200) {
            psi200 = psi;
            flow200 = f;
            co200 = mc.co;
        }
    }
    {
        const double o1 = std::log2(mfg_errs[0] / mfg_errs[1]);
        const double o2 = std::log2(mfg_errs[1] / mfg_errs[2]);
        const bool orders_ok = o1 >= 1.8 && o1 <= 2.2 && o2 >= 1.8 && o2 <= 2.2;
        report(6, orders_ok && sched_ok && sched_change < 1e-8,
               "second-order convergence with a terminating schedule",
               fmt("orders %.2f / %.2f, last change %.2e", o1, o2, sched_change));
    }
    {
        const double rmax = std::max({mfg_ratios[0], mfg_ratios[1], mfg_ratios[2]});
        const double rmin = std::min({mfg_ratios[0], mfg_ratios[1], mfg_ratios[2]});
        report(7, rmax < 2.0 * rmin, "uniform energy ratio across refinement",
               fmt("ratio spread %.3f", rmax / rmin));
    }
    {
        bool ok = false;
        std::string detail = "extension failed";
        try {
            const ExtendedBackground ext = extend_background(flow200, 256.0);
            const ExtendedProblem ep = extend_problem(co200, flow200, ext);
            const auto [big, cert] = solve_extended(ep, SigmaSchedule{});
            const Field2D restricted = restrict_field(big, flow200.grid.n);
            const double dev = weighted_norms(field_axpy(-1.0, psi200, restricted), 0).l2r;
            ok = cert.converged && dev <= 10.0 * mfg_errs[1];
            detail = fmt("dev %.2e vs 10 x err %.2e", dev, 10.0 * mfg_errs[1]);
        } catch (const Error& e) {
            detail = e.what();
        }
        report(8, ok, "extended solve coincides on the duct", detail);
    }

    // 9: the demo nonlinear solve, with a residual that drops under refinement
    const auto basis12 = std::make_shared<RadialBasis>(build_basis(12, 96));
    {
        bool ok = false;
        std::string detail;
        try {
            const double eps = 1e-3;
            const InletData in = make_inlet(eps, basis12);
            const auto [psi1, rep] = fixed_point_solve(in, flow160);
            const double res160 = nonlinear_residual(psi1, flow160).l2r;
            const BackgroundFlow1D flow320 = solve_background(gas, force, 320);
            const auto [psi1b, repb] = fixed_point_solve(in, flow320);
            const double res320 = nonlinear_residual(psi1b, flow320).l2r;
            ok = rep.iterations <= 20 && rep.max_ratio <= 0.5 &&
                 rep.final_h4 <= std::sqrt(eps) && res320 < res160;
            detail = fmt("iters %.0f, ratio %.3f, residual %.2e", rep.iterations, rep.max_ratio,
                         res160) + fmt(" -> %.2e", res320);
        } catch (const Error& e) {
            detail = e.what();
        }
        report(9, ok, "contractive demo solve", detail);
    }

    // 10: first-order response scaling, and an exactly flat front at eps = 0
    {
        bool ok = false;
        std::string detail;
        try {
            const InletData tmpl = make_inlet(1e-3, basis12);
            const ScalingStudy st = perturbation_scaling_study(
                tmpl, {1e-3, 5e-4, 2.5e-4}, flow160);
            InletData zero = tmpl;
            zero.eps = 0.0;
            const auto [psi_z, rep_z] = fixed_point_solve(zero, flow160);
            const double z_norm = weighted_norms(psi_z, 0).l2r;
            const double z_front = sonic_front(psi_z, flow160).c1_norm;
            ok = st.slope_h2 >= 0.9 && st.slope_h2 <= 1.1 &&
                 st.slope_front >= 0.9 && st.slope_front <= 1.1 &&
                 z_norm <= 1e-10 && z_front <= 1e-10;
            detail = fmt("slopes %.4f / %.4f, ", st.slope_h2, st.slope_front) +
                     fmt("zero response %.1e / %.1e", z_norm, z_front);
        } catch (const Error& e) {
            detail = e.what();
        }
        report(10, ok, "linear response of solution and front", detail);
    }

    // 11: norm machinery on a 50-field suite
    {
        const auto basis6 = std::make_shared<RadialBasis>(build_basis(6, 24));
        std::mt19937_64 rng(2026);
        double eq_dev = 0.0;
        bool finite = true;
        for (int t = 0; t < 50; ++t) {
            const Grid1D grid(-1.0, 1.0, 100);
            const Field2D f = random_field(grid, basis6, rng);
            for (int k = 0; k <= 2; ++k)
                eq_dev = std::max(eq_dev, std::abs(norm_equivalence_check(f, k).ratio - 1.0));
            if (t < 10) {
                const Field2D g = random_field(grid, basis6, rng);
                const BoundCheck alg = algebra_check(f, g, 2);
                finite = finite && std::isfinite(alg.ratio) && alg.ratio > 0.0;
            }
        }
        // algebra / sup-bound ratios must be grid-stable
        double drift = 0.0;
        for (int t = 0; t < 5; ++t) {
            std::vector<double> alg_r, linf_r;
            for (int M : {100, 200}) {
                std::mt19937_64 rloc(100 + t);
                const Grid1D grid(-1.0, 1.0, M);
                Field2D f = random_field(grid, basis6, rloc);
                const Field2D g = random_field(grid, basis6, rloc);
                alg_r.push_back(algebra_check(f, g, 2).ratio);
                for (int i = 0; i < f.M(); ++i) {
                    double axis = 0.0;
                    for (int j = 1; j < f.N(); ++j) axis += f.a(i, j) * basis6->value_at0(j);
                    f.a(i, 0) = -axis / basis6->value_at0(0);
                }
                linf_r.push_back(linf_bound_check(f).ratio);
            }
            drift = std::max(drift, std::max(alg_r[1] / alg_r[0], alg_r[0] / alg_r[1]));
            drift = std::max(drift, std::max(linf_r[1] / linf_r[0], linf_r[0] / linf_r[1]));
        }
        report(11, eq_dev <= 1e-8 && finite && drift < 2.0, "norm suite on 50 random fields",
               fmt("equivalence dev %.2e, bound drift %.3f", eq_dev, drift));
    }

    // 12: front exponents of the three degenerate force shapes
    {
        struct Case { ForceKind kind; std::vector<double> params; double expect; };
        const std::vector<Case> cases = {
            {ForceKind::polynomial, {0.0, 0.0, 0.0, 0.0, 1.0}, 3.0},
            {ForceKind::polynomial, {0.0, 0.0, 1.0}, 2.0},
            {ForceKind::sign_jump, {0.0}, 0.5},
        };
        bool ok = true;
        std::string detail;
        for (const Case& c : cases) {
            ForceModel shape;
            shape.kind = c.kind;
            shape.params = c.params;
            const BackgroundFlow1D f = solve_background(gas, calibrate_force(shape, gas), 160);
            const bool predicted = std::abs(f.classification.predicted_exponent - c.expect) == 0.0;
            double worst = 0.0;
            for (int side : {+1, -1})
                worst = std::max(worst, std::abs(slope_of_front(f, side) - c.expect) / c.expect);
            ok = ok && predicted && worst <= 0.05;
            detail += fmt("%.1f: %.1f%% ", c.expect, 100.0 * worst);
        }
        report(12, ok, "sonic exponents by force degeneracy", detail);
    }

    std::printf("%s\n", failures == 0 ? "all checks passed" : "FAILURES PRESENT");
    return failures == 0 ? 0 : 1;
}
