#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "transonic/background.hpp"
#include "transonic/force.hpp"

using namespace transonic;

namespace {

GasConfig demo_gas() { return GasConfig{}; }  // gamma=2, rho0=u0=1, [-1,1]

ForceModel demo_force() {
    ForceModel shape;
    shape.kind = ForceKind::linear;
    return calibrate_force(shape, demo_gas());
}

} // namespace

TEST_CASE("calibration of the linear demo force") {
    const GasConfig gas = demo_gas();
    REQUIRE(gas.J() == 1.0);
    REQUIRE(gas.B0() == 2.5);
    const ForceModel f = demo_force();
    // target = 1.5 * 2^(2/3) - 2.5 over an upstream shape integral of -1/2
    const double amp_exact = 5.0 - 3.0 * std::pow(2.0, 2.0 / 3.0);
    REQUIRE(f.amplitude == Catch::Approx(amp_exact).epsilon(1e-14));
    // calibrated: the Bernoulli function just touches zero at the sonic state
    const double cs = sonic_speed(gas.J(), gas.gamma);
    REQUIRE(std::abs(bernoulli_F(gas, f, 0.0, cs)) < 1e-13);
}

TEST_CASE("Bernoulli roots at the outlet") {
    // gamma = 2 at x1 = 1: t^3 - 5 t + 4 = 0, roots 1 and (-1 + sqrt(17))/2
    const auto roots = bernoulli_roots(1.0, demo_gas(), demo_force());
    REQUIRE(std::abs(roots.first - 1.0) < 1e-12);
    REQUIRE(std::abs(roots.second - 0.5 * (std::sqrt(17.0) - 1.0)) < 1e-12);
}

TEST_CASE("sonic speed and slope of the demo flow") {
    const BackgroundFlow1D flow = solve_background(demo_gas(), demo_force(), 160);
    REQUIRE(std::abs(flow.c_star - std::cbrt(2.0)) < 1e-14);
    REQUIRE(flow.classification.kind == SonicCase::positive_accel);
    const double nu_exact = std::sqrt(flow.force.amplitude / 3.0);
    REQUIRE(flow.classification.leading_coefficient == Catch::Approx(nu_exact).epsilon(1e-12));
    REQUIRE(flow.velocity_at(0.0) == flow.c_star);
}

TEST_CASE("desingularized branch agrees with the direct root") {
    const BackgroundFlow1D flow = solve_background(demo_gas(), demo_force(), 160);
    REQUIRE(flow.delta_switch > 0.05);
    for (double x : {-0.05, -0.01, 0.01, 0.05}) {
        const double u_newton = flow.velocity_at(x);
        const auto roots = bernoulli_roots(x, flow.gas, flow.force);
        const double u_root = x < 0.0 ? roots.first : roots.second;
        REQUIRE(std::abs(u_newton - u_root) < 1e-11);
    }
}

TEST_CASE("Bernoulli invariant holds along the solved flow") {
    for (int M : {160, 320, 640}) {
        const BackgroundFlow1D flow = solve_background(demo_gas(), demo_force(), M);
        double worst = 0.0;
        for (int i = 0; i < M; ++i) {
            const double x = flow.grid.x(i);
            const double phi = flow.force.integral(flow.gas.L0, x);
            const double res = 0.5 * flow.u[i] * flow.u[i] +
                               flow.c2[i] / (flow.gas.gamma - 1.0) - phi - flow.B0;
            worst = std::max(worst, std::abs(res));
            worst = std::max(worst, std::abs(flow.rho[i] * flow.u[i] - flow.J));
        }
        CAPTURE(M);
        REQUIRE(worst < 1e-10);
    }
}

TEST_CASE("acceleration from the implicit relation") {
    const BackgroundFlow1D flow = solve_background(demo_gas(), demo_force(), 320);
    // compare du against a centered difference of velocity_at away from 0
    for (double x : {-0.7, -0.3, 0.3, 0.7}) {
        const double h = 1e-5;
        const double d = (flow.velocity_at(x + h) - flow.velocity_at(x - h)) / (2.0 * h);
        REQUIRE(flow.dvelocity_at(x) == Catch::Approx(d).margin(1e-8));
    }
}

TEST_CASE("sonic point classification by force shape") {
    const GasConfig gas = demo_gas();

    ForceModel lin;
    lin.kind = ForceKind::linear;
    const SonicClassification c_lin = classify_sonic_point(calibrate_force(lin, gas), gas.gamma);
    REQUIRE(c_lin.kind == SonicCase::positive_accel);
    REQUIRE(c_lin.predicted_exponent == 1.0);

    ForceModel p5;  // shape x^5: first nonzero derivative at order 5 = 4*1 + 1
    p5.kind = ForceKind::polynomial;
    p5.params = {0.0, 0.0, 0.0, 0.0, 1.0};
    const SonicClassification c5 = classify_sonic_point(calibrate_force(p5, gas), gas.gamma);
    REQUIRE(c5.kind == SonicCase::zero_accel_smooth);
    REQUIRE(c5.m == 1);
    REQUIRE(c5.predicted_exponent == 3.0);

    ForceModel p3;  // shape x^3: first nonzero derivative at order 3 = 4*1 - 1
    p3.kind = ForceKind::polynomial;
    p3.params = {0.0, 0.0, 1.0};
    const SonicClassification c3 = classify_sonic_point(calibrate_force(p3, gas), gas.gamma);
    REQUIRE(c3.kind == SonicCase::zero_accel_jump);
    REQUIRE(c3.m == 1);
    REQUIRE(c3.predicted_exponent == 2.0);

    ForceModel sj;
    sj.kind = ForceKind::sign_jump;
    sj.params = {0.0};
    const SonicClassification cj = classify_sonic_point(calibrate_force(sj, gas), gas.gamma);
    REQUIRE(cj.kind == SonicCase::holder);
    REQUIRE(cj.predicted_exponent == 0.5);

    ForceModel bad;  // -x violates the sign pattern
    bad.kind = ForceKind::linear;
    bad.amplitude = -1.0;
    REQUIRE_THROWS_AS(calibrate_force(bad, gas), SignPatternViolation);
}

TEST_CASE("multiplier certificate of the demo flow") {
    const BackgroundFlow1D flow = solve_background(demo_gas(), demo_force(), 160);
    const MultiplierCertificate cert = verify_multiplier(flow);
    REQUIRE(cert.kappa_star > 0.0);
    REQUIRE(cert.sign_margins.size() == 4);
    REQUIRE(cert.shift_margins.size() == 4);
    for (double m : cert.sign_margins) REQUIRE(m > 0.0);
    for (double m : cert.shift_margins) REQUIRE(m >= 4.0);
    REQUIRE(cert.d0 > flow.gas.L1);
    // a shift inside the domain makes the multiplier change sign
    REQUIRE_THROWS_AS(verify_multiplier(flow, 0.0), NoCertificate);
}

TEST_CASE("extended background continues the base flow") {
    const BackgroundFlow1D base = solve_background(demo_gas(), demo_force(), 160);
    const ExtendedBackground ext = extend_background(base);
    REQUIRE(ext.L2 == Catch::Approx(2.0).margin(0.02));
    REQUIRE(ext.flow.grid.h() == Catch::Approx(base.grid.h()).epsilon(1e-14));
    // shared nodes carry the same state
    for (int i = 0; i < base.grid.n; i += 13) {
        REQUIRE(ext.flow.grid.x(i) == Catch::Approx(base.grid.x(i)).margin(1e-14));
        REQUIRE(ext.flow.u[i] == Catch::Approx(base.u[i]).margin(1e-12));
    }
    // blended principal coefficient is the elliptic constant far downstream
    REQUIRE(ext.a11.back() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(ext.a1.back() == Catch::Approx(-ext.k0).epsilon(1e-12));
    REQUIRE(ext.k0 > 0.0);
    REQUIRE(ext.d0 > ext.L2);
}
