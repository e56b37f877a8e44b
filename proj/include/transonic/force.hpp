#ifndef TRANSONIC_FORCE_HPP
#define TRANSONIC_FORCE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/grid.hpp"

namespace transonic {

struct GasConfig {
    double gamma = 2.0;
    double rho0 = 1.0;
    double u0 = 1.0;
    double L0 = -1.0;
    double L1 = 1.0;

    void validate() const {
        if (!(gamma > 1.0)) throw ValidationError("gamma must exceed 1");
        if (!(rho0 > 0.0)) throw ValidationError("rho0 must be positive");
        if (!(u0 > 0.0)) throw ValidationError("u0 must be positive");
        if (!(L0 < 0.0) || !(L1 > 0.0)) throw ValidationError("need L0 < 0 < L1");
        if (!(u0 * u0 < gamma * std::pow(rho0, gamma - 1.0)))
            throw ValidationError("inlet must be subsonic: u0^2 < gamma*rho0^(gamma-1)");
    }
    double J() const { return rho0 * u0; }
    double B0() const {
        return 0.5 * u0 * u0 + gamma / (gamma - 1.0) * std::pow(rho0, gamma - 1.0);
    }
};

inline double sonic_speed(double J, double gamma) {
    if (!(J > 0.0) || !(gamma > 1.0)) throw ValidationError("sonic_speed: need J > 0, gamma > 1");
    return std::pow(gamma, 1.0 / (gamma + 1.0)) * std::pow(J, (gamma - 1.0) / (gamma + 1.0));
}

enum class ForceKind { linear, polynomial, sign_jump, table };

// Axial force profile f(x1) on [L0, L1], vanishing at the sonic station x1=0,
// negative upstream and positive downstream of it. `amplitude` is the overall
// scale adjusted by calibrate_force.
struct ForceModel {
    ForceKind kind = ForceKind::linear;
    // polynomial: shape = sum params[i] * x^(i+1) (no constant term)
    // sign_jump:  params[0] = m (integer >= 0), shape = sgn(x) * x^(2m)
    // linear:     shape = x
    std::vector<double> params;
    double amplitude = 1.0;
    // table kind only
    std::vector<double> xs, fs;

    double shape_value(double x) const {
        switch (kind) {
            case ForceKind::linear:
                return x;
            case ForceKind::polynomial: {
                double s = 0.0;
                for (std::size_t i = params.size(); i-- > 0;) s = (s + params[i]) * x;
                return s;
            }
            case ForceKind::sign_jump: {
                const int m = jump_order();
                const double p = std::pow(std::abs(x), 2 * m);
                return x > 0.0 ? p : (x < 0.0 ? -p : 0.0);
            }
            case ForceKind::table: {
                if (xs.size() < 4) throw ValidationError("table force: need at least 4 samples");
                return interp_uniform(fs, xs.front(), xs[1] - xs[0], x);
            }
        }
        return 0.0;
    }

    double value(double x) const { return amplitude * shape_value(x); }

    // integral of shape from a to b, closed form for the analytic kinds
    double shape_integral(double a, double b) const {
        switch (kind) {
            case ForceKind::linear:
                return 0.5 * (b * b - a * a);
            case ForceKind::polynomial: {
                double s = 0.0;
                for (std::size_t i = 0; i < params.size(); ++i) {
                    const double p = static_cast<double>(i) + 2.0;
                    s += params[i] / p * (std::pow(b, p) - std::pow(a, p));
                }
                return s;
            }
            case ForceKind::sign_jump: {
                const int m = jump_order();
                const double p = 2.0 * m + 1.0;
                // antiderivative of sgn(x)|x|^(2m) is |x|^(2m+1)/(2m+1)
                return (std::pow(std::abs(b), p) - std::pow(std::abs(a), p)) / p;
            }
            case ForceKind::table: {
                // cumulative trapezoid on the sample grid plus a partial cell
                auto cum = [&](double z) {
                    const double h = xs[1] - xs[0];
                    double acc = 0.0, prev = fs[0];
                    double xprev = xs[0];
                    for (std::size_t i = 1; i < xs.size() && xs[i] <= z; ++i) {
                        acc += 0.5 * (prev + fs[i]) * h;
                        prev = fs[i];
                        xprev = xs[i];
                    }
                    if (z > xprev) {
                        const double fz = interp_uniform(fs, xs.front(), h, z);
                        acc += 0.5 * (prev + fz) * (z - xprev);
                    }
                    return acc;
                };
                return cum(b) - cum(a);
            }
        }
        return 0.0;
    }

    double integral(double a, double b) const { return amplitude * shape_integral(a, b); }

    int jump_order() const {
        if (kind != ForceKind::sign_jump)
            throw ValidationError("jump_order: only defined for sign_jump forces");
        const int m = params.empty() ? 0 : static_cast<int>(params[0]);
        if (m < 0) throw ValidationError("sign_jump force: m must be >= 0");
        return m;
    }

    bool has_derivatives_at_0() const {
        return kind == ForceKind::linear || kind == ForceKind::polynomial;
    }

    // f'(0) .. f^(5)(0), including the amplitude
    std::vector<double> derivatives_at_0() const {
        if (!has_derivatives_at_0())
            throw Unclassifiable("derivatives at the sonic station are unavailable for this force kind");
        std::vector<double> d(5, 0.0);
        if (kind == ForceKind::linear) {
            d[0] = amplitude;
        } else {
            double fact = 1.0;
            for (int k = 1; k <= 5; ++k) {
                fact *= k;
                if (k - 1 < static_cast<int>(params.size())) d[k - 1] = amplitude * fact * params[k - 1];
            }
        }
        return d;
    }
};

// checks f < 0 on [L0, 0), f(0) = 0, f > 0 on (0, L1] against a dense sample
inline void check_sign_pattern(const ForceModel& force, const GasConfig& gas, int samples = 2048) {
    if (std::abs(force.value(0.0)) > 1e-12 * (std::abs(force.amplitude) + 1.0))
        throw SignPatternViolation("force must vanish at x1 = 0");
    for (int i = 0; i <= samples; ++i) {
        const double x = gas.L0 + (gas.L1 - gas.L0) * i / samples;
        if (std::abs(x) < 1e-9 * (gas.L1 - gas.L0)) continue;
        const double f = force.value(x);
        if (x < 0.0 && !(f < 0.0))
            throw SignPatternViolation("force must be negative on [L0, 0)");
        if (x > 0.0 && !(f > 0.0))
            throw SignPatternViolation("force must be positive on (0, L1]");
    }
}

// compatibility level the upstream force integral must reach so that the
// Bernoulli function just touches zero at the sonic station
inline double calibration_target(const GasConfig& gas) {
    const double g = gas.gamma, J = gas.J();
    return (g + 1.0) / (2.0 * (g - 1.0)) * std::pow(g, 2.0 / (g + 1.0)) *
               std::pow(J, 2.0 * (g - 1.0) / (g + 1.0)) -
           gas.B0();
}

inline ForceModel calibrate_force(const ForceModel& shape, const GasConfig& gas) {
    gas.validate();
    check_sign_pattern(shape, gas);
    const double I0 = shape.integral(gas.L0, 0.0);
    if (!(I0 < 0.0)) throw SignPatternViolation("upstream force integral must be negative");
    const double target = calibration_target(gas);
    const double factor = target / I0;
    if (!(factor > 0.0)) throw Infeasible("calibration requires a non-positive amplitude");
    ForceModel out = shape;
    out.amplitude = shape.amplitude * factor;
    return out;
}

enum class SonicCase { positive_accel, zero_accel_smooth, zero_accel_jump, holder };

struct SonicClassification {
    SonicCase kind = SonicCase::positive_accel;
    int m = 0;
    double predicted_exponent = 1.0;  // leading power of u - c_star in x1
    // positive_accel: u'(0); zero_accel_smooth: u^(2m+1)(0);
    // zero_accel_jump: |y(0+)| of u = c_star + x^(2m) y
    double leading_coefficient = 0.0;

    std::string name() const {
        switch (kind) {
            case SonicCase::positive_accel: return "positive_accel";
            case SonicCase::zero_accel_smooth: return "zero_accel_smooth";
            case SonicCase::zero_accel_jump: return "zero_accel_jump";
            case SonicCase::holder: return "holder";
        }
        return "?";
    }
};

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline SonicClassification classify_sonic_point(const ForceModel& force, double gamma) {
    SonicClassification cls;
    if (force.kind == ForceKind::sign_jump) {
        const int m = force.jump_order();
        cls.kind = SonicCase::holder;
        cls.m = m;
        cls.predicted_exponent = m + 0.5;
        cls.leading_coefficient = 0.0;
        return cls;
    }
    const std::vector<double> d = force.derivatives_at_0();
    if (d[0] > 0.0) {
        cls.kind = SonicCase::positive_accel;
        cls.m = 0;
        cls.predicted_exponent = 1.0;
        cls.leading_coefficient = std::sqrt(d[0] / (gamma + 1.0));
        return cls;
    }
    if (d[0] != 0.0) throw Unclassifiable("f'(0) < 0 matches no admissible acceleration pattern");
    int k = 0;
    for (int i = 1; i < 5; ++i)
        if (d[i] != 0.0) { k = i + 1; break; }
    if (k == 0) throw Unclassifiable("all force derivatives vanish at the sonic station");
    if (d[k - 1] < 0.0) throw Unclassifiable("leading force derivative at 0 must be positive");
    if ((k - 1) % 4 == 0) {
        const int m = (k - 1) / 4;  // k = 4m+1
        cls.kind = SonicCase::zero_accel_smooth;
        cls.m = m;
        cls.predicted_exponent = 2.0 * m + 1.0;
        cls.leading_coefficient =
            factorial(2 * m + 1) * std::sqrt(2.0 * d[k - 1] / ((gamma + 1.0) * factorial(4 * m + 2)));
        return cls;
    }
    if ((k + 1) % 4 == 0) {
        const int m = (k + 1) / 4;  // k = 4m-1
        cls.kind = SonicCase::zero_accel_jump;
        cls.m = m;
        cls.predicted_exponent = 2.0 * m;
        cls.leading_coefficient = std::sqrt(2.0 * d[k - 1] / ((gamma + 1.0) * factorial(4 * m)));
        return cls;
    }
    throw Unclassifiable("derivative vanishing pattern matches no known case");
}

} // namespace transonic

#endif
