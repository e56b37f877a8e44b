#ifndef TRANSONIC_NORMS_HPP
#define TRANSONIC_NORMS_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/field.hpp"
#include "transonic/grid.hpp"

namespace transonic {

struct NormReport {
    double l2r = 0.0, h1r = 0.0, h2r = 0.0, h3r = 0.0, h4r = 0.0;
    // squared value of every term entering the norms, by name
    std::vector<std::pair<std::string, double>> components;

    double up_to(int m) const {
        switch (m) {
            case 0: return l2r;
            case 1: return h1r;
            case 2: return h2r;
            case 3: return h3r;
            case 4: return h4r;
        }
        throw ValidationError("NormReport::up_to: order must be 0..4");
    }
};

namespace detail {

// squared weighted L2 integral of a (x1-derivative order, radial sample
// array) combination of a modal field
struct NormWorkspace {
    const Field2D* f = nullptr;
    std::vector<std::vector<double>> Ax;  // x1 derivatives of the modal table
    std::vector<double> gw;               // x1 quadrature weights

    NormWorkspace(const Field2D& field, int max_dx) : f(&field) {
        Ax.resize(max_dx + 1);
        Ax[0] = field.A;
        for (int k = 1; k <= max_dx; ++k) Ax[k] = field.x1_derivative(k);
        gw = gregory_weights(field.M(), field.grid.h());
    }

    double sample(int k, const std::vector<double>& bas, int i, int q) const {
        const int N = f->N(), Q = f->basis->Q();
        const std::vector<double>& A = Ax[k];
        double s = 0.0;
        for (int j = 0; j < N; ++j)
            s += A[static_cast<std::size_t>(i) * N + j] * bas[static_cast<std::size_t>(j) * Q + q];
        return s;
    }

    double term(int k, const std::vector<double>& bas) const {
        const int M = f->M(), Q = f->basis->Q();
        double total = 0.0;
        for (int i = 0; i < M; ++i) {
            double row = 0.0;
            for (int q = 0; q < Q; ++q) {
                const double v = sample(k, bas, i, q);
                row += f->basis->quad.w[q] * v * v;
            }
            total += gw[i] * row;
        }
        return total;
    }
};

} // namespace detail

inline NormReport weighted_norms(const Field2D& f, int up_to = 4) {
    if (up_to < 0 || up_to > 4) throw ValidationError("weighted_norms: order must be 0..4");
    if (up_to == 4 && f.M() < 9)
        throw InsufficientResolution("weighted_norms: 4th-order norms need at least 9 axial nodes");
    const detail::NormWorkspace ws(f, up_to);
    const RadialBasis& B = *f.basis;

    NormReport rep;
    auto push = [&rep](const std::string& name, double sq) {
        rep.components.emplace_back(name, sq);
        return sq;
    };

    double acc = push("f", ws.term(0, B.b));
    rep.l2r = std::sqrt(acc);
    if (up_to >= 1) {
        acc += push("dx f", ws.term(1, B.b));
        acc += push("dr f", ws.term(0, B.d1));
        rep.h1r = std::sqrt(acc);
    }
    if (up_to >= 2) {
        acc += push("dxx f", ws.term(2, B.b));
        acc += 2.0 * push("dxr f", ws.term(1, B.d1));
        acc += push("drr f", ws.term(0, B.d2));
        acc += push("dr f / r", ws.term(0, B.s0));
        rep.h2r = std::sqrt(acc);
    }
    if (up_to >= 3) {
        acc += push("dxxx f", ws.term(3, B.b));
        acc += 3.0 * push("dxxr f", ws.term(2, B.d1));
        acc += 3.0 * push("dxrr f", ws.term(1, B.d2));
        acc += push("drrr f", ws.term(0, B.d3));
        acc += push("dx (dr f / r)", ws.term(1, B.s0));
        acc += push("dr (dr f / r)", ws.term(0, B.s1));
        rep.h3r = std::sqrt(acc);
    }
    if (up_to >= 4) {
        acc += push("dxxxx f", ws.term(4, B.b));
        acc += 4.0 * push("dxxxr f", ws.term(3, B.d1));
        acc += 6.0 * push("dxxrr f", ws.term(2, B.d2));
        acc += 4.0 * push("dxrrr f", ws.term(1, B.d3));
        acc += push("drrrr f", ws.term(0, B.d4));
        acc += push("dxx (dr f / r)", ws.term(2, B.s0));
        acc += 2.0 * push("dxr (dr f / r)", ws.term(1, B.s1));
        acc += push("drr (dr f / r)", ws.term(0, B.s2));
        acc += push("(1/r) dr (dr f / r)", ws.term(0, B.ss));
        rep.h4r = std::sqrt(acc);
    }
    return rep;
}

struct BoundCheck {
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

// sup-norm bound through second-order weighted norms; requires the field to
// vanish on the axis
inline BoundCheck linf_bound_check(const Field2D& g) {
    const NormReport rep = weighted_norms(g, 2);
    double axis = 0.0;
    for (int i = 0; i < g.M(); ++i) {
        double v = 0.0;
        for (int j = 0; j < g.N(); ++j) v += g.a(i, j) * g.basis->value_at0(j);
        axis = std::max(axis, std::abs(v));
    }
    if (axis > 1e-8 * (rep.l2r + 1e-30) && axis > 1e-14)
        throw PreconditionViolation("linf_bound_check: field does not vanish on the axis");
    double sup2 = 0.0;
    for (int i = 0; i < g.M(); ++i)
        for (int q = 0; q < g.basis->Q(); ++q) {
            const double v = g.value(i, q);
            sup2 = std::max(sup2, v * v);
        }
    BoundCheck out;
    out.lhs = sup2;
    out.rhs = rep.h2r * rep.h2r;
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

// product norm vs product of norms at order m (Banach algebra property)
inline BoundCheck algebra_check(const Field2D& f, const Field2D& g, int m) {
    if (m < 2 || m > 3) throw ValidationError("algebra_check: order must be 2 or 3");
    const int Q = f.basis->Q();
    if (f.M() != g.M() || Q != g.basis->Q())
        throw DimensionMismatch("algebra_check: fields live on different grids");
    std::vector<double> prod(static_cast<std::size_t>(f.M()) * Q);
    for (int i = 0; i < f.M(); ++i)
        for (int q = 0; q < Q; ++q)
            prod[static_cast<std::size_t>(i) * Q + q] = f.value(i, q) * g.value(i, q);
    const Field2D fg = field_from_samples(f.grid, f.basis, prod);
    BoundCheck out;
    out.lhs = weighted_norms(fg, m).up_to(m);
    out.rhs = weighted_norms(f, m).up_to(m) * weighted_norms(g, m).up_to(m);
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

struct EquivalenceCheck {
    double weighted = 0.0, cartesian = 0.0, ratio = 0.0;  // ratio = cart^2 / (2 pi w^2)
};

// Sobolev norm of the revolved field f(x1, |x'|) on the 3D cylinder, compared
// against the weighted norm. Orders 0..2 are computed independently by an
// angular quadrature of the chain-rule derivatives; orders 3 and 4 use the
// expansion of the revolved derivatives in radial-operator terms.
inline EquivalenceCheck norm_equivalence_check(const Field2D& f, int k) {
    if (k < 0 || k > 4) throw ValidationError("norm_equivalence_check: order must be 0..4");
    const NormReport rep = weighted_norms(f, std::min(4, std::max(k, 2)));
    const detail::NormWorkspace ws(f, std::min(k, 4));
    const RadialBasis& B = *f.basis;

    EquivalenceCheck out;
    out.weighted = rep.up_to(k);
    const double two_pi = 2.0 * M_PI;

    if (k <= 2) {
        const int ntheta = 32;
        const int M = f.M(), Q = B.Q();
        double cart2 = 0.0;
        for (int a = 0; a < ntheta; ++a) {
            const double th = two_pi * a / ntheta;
            const double c = std::cos(th), s = std::sin(th);
            double block = 0.0;
            for (int i = 0; i < M; ++i) {
                double row = 0.0;
                for (int q = 0; q < Q; ++q) {
                    const double v = ws.sample(0, B.b, i, q);
                    double pt = v * v;
                    if (k >= 1) {
                        const double fx = ws.sample(1, B.b, i, q);
                        const double fr = ws.sample(0, B.d1, i, q);
                        pt += fx * fx + (c * fr) * (c * fr) + (s * fr) * (s * fr);
                    }
                    if (k >= 2) {
                        const double fxx = ws.sample(2, B.b, i, q);
                        const double fxr = ws.sample(1, B.d1, i, q);
                        const double frr = ws.sample(0, B.d2, i, q);
                        const double s0 = ws.sample(0, B.s0, i, q);
                        const double f22 = c * c * frr + s * s * s0;
                        const double f33 = s * s * frr + c * c * s0;
                        const double f23 = c * s * (frr - s0);
                        pt += fxx * fxx + 2.0 * (c * fxr) * (c * fxr) + 2.0 * (s * fxr) * (s * fxr) +
                              f22 * f22 + f33 * f33 + 2.0 * f23 * f23;
                    }
                    row += B.quad.w[q] * pt;
                }
                block += ws.gw[i] * row;
            }
            cart2 += block * (two_pi / ntheta);
        }
        out.cartesian = std::sqrt(cart2);
    } else if (k == 3) {
        const double B3 = ws.term(3, B.b) + 3.0 * ws.term(2, B.d1) + 3.0 * ws.term(1, B.d2) +
                          ws.term(0, B.d3);
        const double extra = 2.0 * (ws.term(1, B.s0) + ws.term(0, B.s1));
        out.cartesian = std::sqrt(two_pi * (rep.h2r * rep.h2r + B3 + extra));
    } else {
        const double B4 = ws.term(4, B.b) + 4.0 * ws.term(3, B.d1) + 6.0 * ws.term(2, B.d2) +
                          4.0 * ws.term(1, B.d3) + ws.term(0, B.d4);
        const double extra = ws.term(2, B.s0) + 4.0 * ws.term(1, B.s1) + 6.0 * ws.term(0, B.s2) +
                             9.0 * ws.term(0, B.ss);
        const NormReport rep3 = weighted_norms(f, 3);
        out.cartesian = std::sqrt(two_pi * (rep3.h3r * rep3.h3r + B4 + extra));
    }
    const double w2 = out.weighted * out.weighted;
    out.ratio = w2 > 0.0 ? out.cartesian * out.cartesian / (two_pi * w2) : 0.0;
    return out;
}

} // namespace transonic

#endif
