#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "transonic/radial_basis.hpp"

using namespace transonic;

namespace {

// independent Bessel oracle: J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt,
// composite Simpson
double bessel_simpson(int n, double x) {
    const int panels = 512;
    const double h = M_PI / panels;
    auto f = [&](double t) { return std::cos(n * t - x * std::sin(t)); };
    double s = f(0.0) + f(M_PI);
    for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return s * h / (3.0 * M_PI);
}

} // namespace

TEST_CASE("cylinder function values against the integral representation") {
    for (double x : {0.0, 0.3, 1.7, 4.2, 9.5, 14.0}) {
        REQUIRE(bessel_j0(x) == Catch::Approx(bessel_simpson(0, x)).margin(1e-12));
        REQUIRE(bessel_j1(x) == Catch::Approx(bessel_simpson(1, x)).margin(1e-12));
    }
    REQUIRE(bessel_j1(-2.0) == Catch::Approx(-bessel_j1(2.0)).margin(1e-15));
}

TEST_CASE("first positive zeros of J1") {
    const std::vector<double> z = bessel_j1_zeros(4);
    // values computed from the integral representation plus bisection
    const double ref[4] = {3.8317059702075123, 7.0155866698156188,
                           10.1734681350627222, 13.3236919363142230};
    for (int k = 0; k < 4; ++k) REQUIRE(std::abs(z[k] - ref[k]) < 1e-10);
    // independent cross-check of the first zero through the Simpson oracle
    double lo = 3.0, hi = 4.5;
    double flo = bessel_simpson(1, lo);
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_simpson(1, mid);
        if (flo * fm <= 0.0) hi = mid; else { lo = mid; flo = fm; }
    }
    REQUIRE(std::abs(z[0] - 0.5 * (lo + hi)) < 1e-9);
}

TEST_CASE("Neumann eigenvalues") {
    const std::vector<double> lam = find_eigenvalues(6);
    REQUIRE(lam[0] == 0.0);
    REQUIRE(std::sqrt(lam[1]) == Catch::Approx(3.8317059702).margin(1e-8));
    for (int j = 1; j < 6; ++j) REQUIRE(lam[j] > lam[j - 1]);
}

TEST_CASE("basis orthonormality under the weighted quadrature") {
    const RadialBasis B = build_basis(16, 128);
    double worst = 0.0;
    for (int i = 0; i < B.N; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int q = 0; q < B.Q(); ++q)
                s += B.quad.w[q] * B.b[static_cast<std::size_t>(i) * B.Q() + q] *
                     B.b[static_cast<std::size_t>(j) * B.Q() + q];
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    REQUIRE(worst < 1e-10);
}

TEST_CASE("normalization constants match the closed form") {
    const RadialBasis B = build_basis(8, 48);
    REQUIRE(B.c[0] == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
    for (int j = 1; j < B.N; ++j)
        REQUIRE(B.c[j] == Catch::Approx(std::sqrt(2.0) / std::abs(bessel_j0(B.k[j]))).epsilon(1e-10));
}

TEST_CASE("derivative tables are consistent with the values") {
    const RadialBasis B = build_basis(6, 32);
    const double h = 1e-5;
    for (int j = 0; j < B.N; ++j)
        for (double r : {0.2, 0.5, 0.8}) {
            const double d = (B.value_at(j, r + h) - B.value_at(j, r - h)) / (2.0 * h);
            REQUIRE(B.deriv_at(j, r) == Catch::Approx(d).margin(1e-7));
            const double d2 = (B.deriv_at(j, r + h) - B.deriv_at(j, r - h)) / (2.0 * h);
            REQUIRE(B.deriv2_at(j, r) == Catch::Approx(d2).margin(1e-6));
        }
    // eigen-relation at the quadrature nodes: b'' + b'/r + lambda b = 0
    for (int j = 0; j < B.N; ++j)
        for (int q = 0; q < B.Q(); ++q) {
            const std::size_t idx = static_cast<std::size_t>(j) * B.Q() + q;
            REQUIRE(std::abs(B.d2[idx] + B.s0[idx] + B.lambda[j] * B.b[idx]) < 1e-10);
        }
}

TEST_CASE("projection round trip on a band-limited profile") {
    const RadialBasis B = build_basis(10, 64);
    std::vector<double> a_in(B.N);
    for (int j = 0; j < B.N; ++j) a_in[j] = std::cos(1.0 + j) / (1.0 + j);
    const std::vector<double> f = reconstruct(B, a_in);
    const std::vector<double> a_out = project(B, f);
    for (int j = 0; j < B.N; ++j) REQUIRE(a_out[j] == Catch::Approx(a_in[j]).margin(1e-12));
}

TEST_CASE("quadrature integrates the cylinder measure") {
    const WeightedQuadrature quad = quadrature_rule(32);
    // int_0^1 r^(2k+1) dr = 1/(2k+2)
    for (int k = 0; k <= 4; ++k) {
        std::vector<double> f(quad.order);
        for (int q = 0; q < quad.order; ++q) f[q] = std::pow(quad.r[q], 2 * k);
        REQUIRE(quad.integrate(f) == Catch::Approx(1.0 / (2.0 * k + 2.0)).epsilon(1e-13));
    }
}

TEST_CASE("basis construction rejects under-resolved quadrature") {
    REQUIRE_THROWS_AS(build_basis(8, 16), ValidationError);
}
