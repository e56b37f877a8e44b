#ifndef TRANSONIC_LINEAR_SOLVER_HPP
#define TRANSONIC_LINEAR_SOLVER_HPP

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "transonic/background.hpp"
#include "transonic/banded.hpp"
#include "transonic/errors.hpp"
#include "transonic/field.hpp"
#include "transonic/grid.hpp"
#include "transonic/norms.hpp"
#include "transonic/radial_basis.hpp"

namespace transonic {

struct CompatibilityFlags {
    bool ok = false;
    double worst = 0.0;  // worst deviation relative to the field scale
    std::vector<std::pair<std::string, double>> deviations;
};

// coefficient fields of the linearized equation
//   k11 dxx + 2 k12 dxr + drr + (1/r) dr + k1 dx + k2 dr = F0
// sampled on the x1-grid times the radial quadrature nodes
struct CoefficientSet {
    Grid1D grid;
    std::shared_ptr<const RadialBasis> basis;
    std::vector<double> k11, k12, k1, k2, F0;  // M * Q, row-major in x1
    CompatibilityFlags compat;

    int M() const { return grid.n; }
    int Q() const { return basis->Q(); }
};

namespace detail {

// value and derivative at an endpoint of (0,1) extrapolated from the
// clustered quadrature nodes nearest to it
struct EdgeExtrapolator {
    std::vector<int> idx;
    std::vector<double> wval, wder;

    EdgeExtrapolator(const WeightedQuadrature& quad, bool at_one, int npts = 6) {
        const int Q = quad.order;
        std::vector<double> xs(npts);
        idx.resize(npts);
        for (int k = 0; k < npts; ++k) {
            idx[k] = at_one ? Q - npts + k : k;
            xs[k] = quad.r[idx[k]];
        }
        const double z = at_one ? 1.0 : 0.0;
        wval = fd_weights(z, xs, 0);
        wder = fd_weights(z, xs, 1);
    }
    double value(const double* row) const {
        double s = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) s += wval[k] * row[idx[k]];
        return s;
    }
    double deriv(const double* row) const {
        double s = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) s += wder[k] * row[idx[k]];
        return s;
    }
};

inline double field_scale(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s + 1e-30;
}

} // namespace detail

// discrete boundary compatibilities: k12, k2 and the radial derivatives of
// k11, k1, F0 must vanish at r = 0 and r = 1
inline CompatibilityFlags check_compatibilities(const CoefficientSet& co, double tol = 1e-8) {
    CompatibilityFlags flags;
    const int M = co.M(), Q = co.Q();
    const detail::EdgeExtrapolator lo(co.basis->quad, false), hi(co.basis->quad, true);
    struct Item { const std::vector<double>* v; const char* name; bool deriv; };
    const Item items[] = {
        {&co.k12, "k12", false}, {&co.k2, "k2", false},
        {&co.k11, "dr k11", true}, {&co.k1, "dr k1", true}, {&co.F0, "dr F0", true},
    };
    flags.ok = true;
    for (const Item& it : items) {
        const double scale = detail::field_scale(*it.v);
        double dev = 0.0;
        for (int i = 0; i < M; ++i) {
            const double* row = it.v->data() + static_cast<std::size_t>(i) * Q;
            const double a = it.deriv ? lo.deriv(row) : lo.value(row);
            const double b = it.deriv ? hi.deriv(row) : hi.value(row);
            dev = std::max(dev, std::max(std::abs(a), std::abs(b)) / scale);
        }
        flags.deviations.emplace_back(it.name, dev);
        flags.worst = std::max(flags.worst, dev);
        if (dev > tol) flags.ok = false;
    }
    return flags;
}

// per-node Galerkin matrices of the radial projection
struct GalerkinMatrices {
    int M = 0, N = 0;
    std::vector<double> a, b, c;  // a[i*N*N + j*N + m]; j = trial, m = test
    std::vector<double> F;        // F[i*N + m]
    std::vector<double> lambda;   // radial eigenvalues, per mode
};

inline GalerkinMatrices galerkin_matrices(const CoefficientSet& co) {
    const int M = co.M(), Q = co.Q(), N = co.basis->N;
    const RadialBasis& B = *co.basis;
    GalerkinMatrices g;
    g.M = M;
    g.N = N;
    g.a.assign(static_cast<std::size_t>(M) * N * N, 0.0);
    g.b.assign(static_cast<std::size_t>(M) * N * N, 0.0);
    g.c.assign(static_cast<std::size_t>(M) * N * N, 0.0);
    g.F.assign(static_cast<std::size_t>(M) * N, 0.0);
    g.lambda = B.lambda;
    for (int i = 0; i < M; ++i) {
        const std::size_t off = static_cast<std::size_t>(i) * Q;
        for (int q = 0; q < Q; ++q) {
            const double w = B.quad.w[q];
            const double wk11 = w * co.k11[off + q];
            const double wk12 = w * co.k12[off + q];
            const double wk1 = w * co.k1[off + q];
            const double wk2 = w * co.k2[off + q];
            const double wF = w * co.F0[off + q];
            for (int m = 0; m < N; ++m) {
                const double bm = B.b[static_cast<std::size_t>(m) * Q + q];
                g.F[static_cast<std::size_t>(i) * N + m] += wF * bm;
                for (int j = 0; j < N; ++j) {
                    const double bj = B.b[static_cast<std::size_t>(j) * Q + q];
                    const double dbj = B.d1[static_cast<std::size_t>(j) * Q + q];
                    const std::size_t e = (static_cast<std::size_t>(i) * N + j) * N + m;
                    g.a[e] += wk11 * bj * bm;
                    g.b[e] += (wk1 * bj + 2.0 * wk12 * dbj) * bm;
                    g.c[e] += wk2 * dbj * bm;
                }
            }
        }
        for (int j = 0; j < N; ++j)
            g.c[(static_cast<std::size_t>(i) * N + j) * N + j] -= B.lambda[j];
    }
    return g;
}

// global banded system for the sigma-regularized modal ODEs
//   sigma A_m''' + sum_j a_jm A_j'' + sum_j b_jm A_j' + sum_j c_jm A_j = F_m
// Standard boundary rows: A(L0) = A''(L0) = A''(L1) = 0 (the two second
// derivative rows only when sigma > 0). Extended mode replaces the outlet
// row by A'(L_end) = 0.
struct SigmaSystem {
    double sigma = 0.0;
    int M = 0, N = 0;
    double h = 0.0;
    bool extended = false;
    BandedMatrix mat;
    std::vector<double> rhs;
};

inline SigmaSystem assemble_sigma_system(const GalerkinMatrices& g, double sigma,
                                         const Grid1D& grid, bool extended = false) {
    if (sigma < 0.0) throw ValidationError("assemble_sigma_system: sigma must be >= 0");
    const int M = g.M, N = g.N;
    if (grid.n != M) throw DimensionMismatch("assemble_sigma_system: grid/matrix size mismatch");
    if (M < 8) throw SingularAssembly("assemble_sigma_system: grid too coarse for the stencils");
    SigmaSystem sys;
    sys.sigma = sigma;
    sys.M = M;
    sys.N = N;
    sys.h = grid.h();
    sys.extended = extended;
    const int band = 4 * N;
    sys.mat = BandedMatrix(M * N, band, band);
    sys.rhs.assign(static_cast<std::size_t>(M) * N, 0.0);
    const double h = sys.h, h2 = h * h;

    auto add = [&](int i, int m, int inode, int j, double v) {
        sys.mat.add(i * N + m, inode * N + j, v);
    };

    const std::vector<int> d1_back_off = {-2, -1, 0};
    std::vector<double> d1_back_w;
    {
        std::vector<double> xs(d1_back_off.size());
        for (std::size_t k = 0; k < d1_back_off.size(); ++k) xs[k] = d1_back_off[k] * h;
        d1_back_w = fd_weights(0.0, xs, 1);
    }

    // nodal second difference of trial mode j weighted by w, one-sided at
    // the endpoints
    auto add_d2_at = [&](int row, int m, int j, int i, double w) {
        if (i >= 1 && i <= M - 2) {
            add(row, m, i - 1, j, w / h2);
            add(row, m, i, j, -2.0 * w / h2);
            add(row, m, i + 1, j, w / h2);
        } else {
            const int s = (i == 0) ? 1 : -1;
            add(row, m, i, j, 2.0 * w / h2);
            add(row, m, i + s, j, -5.0 * w / h2);
            add(row, m, i + 2 * s, j, 4.0 * w / h2);
            add(row, m, i + 3 * s, j, -w / h2);
        }
    };

    // The reduced operator admits a first-derivative singularity at the sonic
    // line (the coefficient identity b(0) = a'(0) makes the indicial exponent
    // vanish for every mode), and a nodal third-difference scheme picks an
    // O(1) discrete version of it up in its vanishing-sigma limit. The modal
    // equations are therefore written on cell midpoints in terms of exact
    // first differences; the dissipation becomes a flux of nodal second
    // differences, whose end values are the boundary data. The parasite roots
    // of this difference scheme stay on the decaying side at every
    // dissipation level, and the scheme is second order.
    auto flux_row = [&](int cell, int m) {
        const int row = cell + 1, i0 = cell, i1 = cell + 1;
        auto avg = [&](const std::vector<double>& v, int j) {
            return 0.5 * (v[(static_cast<std::size_t>(i0) * N + j) * N + m] +
                          v[(static_cast<std::size_t>(i1) * N + j) * N + m]);
        };
        for (int j = 0; j < N; ++j) {
            const double am = avg(g.a, j), bm = avg(g.b, j), cm = avg(g.c, j);
            double w0 = 0.5 * am, w1 = 0.5 * am;
            bool keep0 = true, keep1 = true;
            if (j == m && sigma > 0.0) {
                w0 -= sigma / h;
                w1 += sigma / h;
                // endpoint second differences of this mode are boundary data
                if (i0 == 0) keep0 = false;
                if (i1 == M - 1) keep1 = false;
            }
            if (keep0 && w0 != 0.0) add_d2_at(row, m, j, i0, w0);
            if (keep1 && w1 != 0.0) add_d2_at(row, m, j, i1, w1);
            add(row, m, i1, j, bm / h + 0.5 * cm);
            add(row, m, i0, j, -bm / h + 0.5 * cm);
        }
        sys.rhs[static_cast<std::size_t>(row) * N + m] =
            0.5 * (g.F[static_cast<std::size_t>(i0) * N + m] +
                   g.F[static_cast<std::size_t>(i1) * N + m]);
    };

    for (int m = 0; m < N; ++m) {
        // inlet value row
        add(0, m, 0, m, 1.0);
        const int last_cell = extended ? M - 3 : M - 2;
        for (int cell = 0; cell <= last_cell; ++cell) flux_row(cell, m);
        if (extended) {
            // outflow slope row
            const int i = M - 1;
            for (std::size_t k = 0; k < d1_back_off.size(); ++k)
                add(i, m, i + d1_back_off[k], m, d1_back_w[k]);
        }
    }
    return sys;
}

namespace detail {

// infinity-norm residual accumulated in extended precision
inline double banded_residual(const BandedMatrix& A, const std::vector<double>& x,
                              const std::vector<double>& b, std::vector<double>& r) {
    const int n = A.n;
    std::vector<long double> acc(b.begin(), b.end());
    for (int j = 0; j < n; ++j) {
        const int lo = std::max(0, j - A.ku), hi = std::min(n - 1, j + A.kl);
        const long double xj = x[j];
        for (int i = lo; i <= hi; ++i)
            acc[i] -= static_cast<long double>(
                          A.ab[static_cast<std::size_t>(j) * A.ldab + A.kl + A.ku + i - j]) *
                      xj;
    }
    r.resize(n);
    double rmax = 0.0;
    for (int i = 0; i < n; ++i) {
        r[i] = static_cast<double>(acc[i]);
        rmax = std::max(rmax, std::abs(r[i]));
    }
    return rmax;
}

} // namespace detail

// direct banded solve, iteratively refined, with a residual certificate
inline std::vector<double> solve_sigma(const SigmaSystem& sys) {
    std::vector<double> x = sys.rhs;
    const BandedLU lu = banded_lu(sys.mat);
    lu.solve(x);
    double fmax = 1e-30;
    for (double v : sys.rhs) fmax = std::max(fmax, std::abs(v));
    std::vector<double> r, best = x;
    double best_res = 1e300;
    for (int pass = 0; pass < 5; ++pass) {
        const double rmax = detail::banded_residual(sys.mat, x, sys.rhs, r);
        if (rmax < best_res) {
            best_res = rmax;
            best = x;
        }
        if (rmax <= 1e-12 * fmax || rmax > 10.0 * best_res) break;
        lu.solve(r);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] += r[k];
    }
    if (best_res > 1e-10 * fmax)
        throw SingularMatrix("solve_sigma: residual too large (sigma = " + std::to_string(sys.sigma) +
                             "); a larger sigma or finer grid may help");
    return best;
}

struct SigmaSchedule {
    double sigma0 = 1e-2;
    int levels = 26;
    double tol_sigma = 1e-8;
    // a dissipation level is kept only while its energy ratio stays within
    // this factor of the best level; levels that lose the uniform energy
    // bound to spurious difference modes are reported and skipped
    double ratio_cap = 50.0;
};

struct SigmaLevel {
    double sigma = 0.0;
    double energy_ratio = 0.0;  // |psi|_H1r / |F0|_L2r at this level
    bool solved = false;        // residual certificate passed
    bool accepted = false;      // energy ratio within the uniform bound
    double change = -1.0;       // H1r difference from the previous accepted level
};

struct LinearCertificate {
    std::vector<SigmaLevel> levels;
    bool converged = false;
    double energy_ratio = 0.0;  // |psi|_H1r / |F0|_L2r of the returned iterate
    double margin_min = 0.0;    // min of the coercivity integrand
    double d0 = 0.0;
    int rejected = 0;
};

namespace detail {

// min over all nodes of d k1 - (d k11)'/2 - d dr(k12) - d k12 / r, the
// integrand of the multiplier-based energy estimate, with d = 6 (x - d0)
inline double coercivity_margin(const CoefficientSet& co, double d0) {
    const int M = co.M(), Q = co.Q();
    const double h = co.grid.h();
    // per-q radial differentiation stencils on the fixed quadrature nodes
    const int w = 7;
    std::vector<std::vector<double>> drw(Q);
    std::vector<int> drlo(Q);
    for (int q = 0; q < Q; ++q) {
        int lo = std::min(std::max(0, q - w / 2), Q - w);
        drlo[q] = lo;
        std::vector<double> xs(w);
        for (int k = 0; k < w; ++k) xs[k] = co.basis->quad.r[lo + k];
        drw[q] = fd_weights(co.basis->quad.r[q], xs, 1);
    }
    // x1 derivative of k11 column-wise
    std::vector<double> dk11(static_cast<std::size_t>(M) * Q);
    std::vector<double> col(M);
    for (int q = 0; q < Q; ++q) {
        for (int i = 0; i < M; ++i) col[i] = co.k11[static_cast<std::size_t>(i) * Q + q];
        const std::vector<double> d = fd_derivative(col, h, 1);
        for (int i = 0; i < M; ++i) dk11[static_cast<std::size_t>(i) * Q + q] = d[i];
    }
    double margin = 1e300;
    for (int i = 0; i < M; ++i) {
        const double d = 6.0 * (co.grid.x(i) - d0);
        const std::size_t off = static_cast<std::size_t>(i) * Q;
        for (int q = 0; q < Q; ++q) {
            double drk12 = 0.0;
            for (int k = 0; k < w; ++k) drk12 += drw[q][k] * co.k12[off + drlo[q] + k];
            const double v = d * co.k1[off + q] - 0.5 * (6.0 * co.k11[off + q] + d * dk11[off + q]) -
                             d * drk12 - d * co.k12[off + q] / co.basis->quad.r[q];
            margin = std::min(margin, v);
        }
    }
    return margin;
}

} // namespace detail

inline std::pair<Field2D, LinearCertificate>
solve_linear(const CoefficientSet& co, const SigmaSchedule& sch, double d0,
             bool extended = false) {
    const GalerkinMatrices g = galerkin_matrices(co);
    LinearCertificate cert;
    cert.d0 = d0;
    cert.margin_min = detail::coercivity_margin(co, d0);

    const Field2D F0f = field_from_samples(co.grid, co.basis, co.F0);
    const double fn = weighted_norms(F0f, 0).l2r;
    if (fn == 0.0) {
        Field2D zero(co.grid, co.basis);
        cert.converged = true;
        return {zero, cert};
    }

    // first pass: solve every level and record its energy ratio
    std::vector<Field2D> iterates(sch.levels, Field2D(co.grid, co.basis));
    cert.levels.assign(sch.levels, SigmaLevel{});
    double best_ratio = 1e300;
    for (int k = 0; k < sch.levels; ++k) {
        SigmaLevel& lv = cert.levels[k];
        lv.sigma = sch.sigma0 * std::pow(2.0, -k);
        try {
            const SigmaSystem sys = assemble_sigma_system(g, lv.sigma, co.grid, extended);
            iterates[k].A = solve_sigma(sys);
            lv.solved = true;
            lv.energy_ratio = weighted_norms(iterates[k], 1).h1r / fn;
            best_ratio = std::min(best_ratio, lv.energy_ratio);
        } catch (const SingularMatrix&) {
            lv.solved = false;
        }
    }

    // second pass: keep the levels that satisfy the uniform energy bound and
    // look for two consecutive kept iterates closer than the tolerance
    int last = -1, prev = -1;
    for (int k = 0; k < sch.levels; ++k) {
        SigmaLevel& lv = cert.levels[k];
        lv.accepted = lv.solved && lv.energy_ratio <= sch.ratio_cap * best_ratio;
        if (!lv.accepted) {
            ++cert.rejected;
            continue;
        }
        if (last >= 0) {
            const Field2D diff = field_axpy(-1.0, iterates[last], iterates[k]);
            lv.change = weighted_norms(diff, 1).h1r;
        }
        prev = last;
        last = k;
        // threshold scales with the data norm for small data so the schedule
        // stops at the same level regardless of an overall scale factor
        if (lv.change >= 0.0 && lv.change < sch.tol_sigma * std::min(1.0, fn)) {
            cert.converged = true;
            break;
        }
    }
    (void)prev;
    if (last < 0)
        throw NoSigmaConvergence("solve_linear: no dissipation level satisfied the residual and "
                                 "energy certificates");
    cert.energy_ratio = cert.levels[last].energy_ratio;
    return {iterates[last], cert};
}

// reflection coefficients of the downstream extension operator:
// sum_j (-1/j)^k c_j = 1 for k = 0..3
inline std::array<double, 4> reflection_coefficients(double* residual = nullptr) {
    double A[4][5];
    for (int k = 0; k < 4; ++k) {
        for (int j = 0; j < 4; ++j) A[k][j] = std::pow(-1.0 / (j + 1.0), k);
        A[k][4] = 1.0;
    }
    for (int c = 0; c < 4; ++c) {
        int p = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        for (int k = 0; k < 5; ++k) std::swap(A[c][k], A[p][k]);
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (int k = c; k < 5; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::array<double, 4> cj{};
    for (int j = 0; j < 4; ++j) cj[j] = A[j][4] / A[j][j];
    if (residual) {
        double res = 0.0;
        for (int k = 0; k < 4; ++k) {
            double s = -1.0;
            for (int j = 0; j < 4; ++j) s += std::pow(-1.0 / (j + 1.0), k) * cj[j];
            res = std::max(res, std::abs(s));
        }
        *residual = res;
    }
    return cj;
}

struct ExtendedProblem {
    CoefficientSet coeffs;  // on the extended grid; slots hold a11, a12, a1, a2, G0
    std::array<double, 4> cj{};
    double vandermonde_residual = 0.0;
    double d0 = 0.0;
    int base_M = 0;
};

inline ExtendedProblem extend_problem(const CoefficientSet& co, const BackgroundFlow1D& base_flow,
                                      const ExtendedBackground& ext) {
    const int M = co.M(), Q = co.Q();
    if (base_flow.grid.n != M) throw DimensionMismatch("extend_problem: flow/coefficient grids differ");
    ExtendedProblem ep;
    ep.cj = reflection_coefficients(&ep.vandermonde_residual);
    if (ep.vandermonde_residual > 1e-12)
        throw ExtensionFailure("extend_problem: reflection coefficients failed to solve");
    ep.d0 = ext.d0;
    ep.base_M = M;
    const Grid1D& g2 = ext.flow.grid;
    const int M2 = g2.n;
    ep.coeffs.grid = g2;
    ep.coeffs.basis = co.basis;
    auto alloc = [&](std::vector<double>& v) { v.assign(static_cast<std::size_t>(M2) * Q, 0.0); };
    alloc(ep.coeffs.k11);
    alloc(ep.coeffs.k12);
    alloc(ep.coeffs.k1);
    alloc(ep.coeffs.k2);
    alloc(ep.coeffs.F0);

    // columns over x1 at fixed q, for interpolation of the reflected argument
    auto column = [&](const std::vector<double>& v, int q) {
        std::vector<double> c(M);
        for (int i = 0; i < M; ++i) c[i] = v[static_cast<std::size_t>(i) * Q + q];
        return c;
    };
    const double L1 = base_flow.gas.L1;
    const double h = base_flow.grid.h();
    const double a0 = base_flow.grid.a;

    std::vector<std::vector<double>> dk11(Q), dk1(Q), ck12(Q), ck2(Q), cF0(Q);
    for (int q = 0; q < Q; ++q) {
        dk11[q] = column(co.k11, q);
        dk1[q] = column(co.k1, q);
        for (int i = 0; i < M; ++i) {
            dk11[q][i] -= base_flow.k11[i];
            dk1[q][i] -= base_flow.k1[i];
        }
        ck12[q] = column(co.k12, q);
        ck2[q] = column(co.k2, q);
        cF0[q] = column(co.F0, q);
    }

    for (int i = 0; i < M2; ++i) {
        const double x = g2.x(i);
        const std::size_t off = static_cast<std::size_t>(i) * Q;
        if (i < M) {
            for (int q = 0; q < Q; ++q) {
                ep.coeffs.k11[off + q] = co.k11[static_cast<std::size_t>(i) * Q + q];
                ep.coeffs.k12[off + q] = co.k12[static_cast<std::size_t>(i) * Q + q];
                ep.coeffs.k1[off + q] = co.k1[static_cast<std::size_t>(i) * Q + q];
                ep.coeffs.k2[off + q] = co.k2[static_cast<std::size_t>(i) * Q + q];
                ep.coeffs.F0[off + q] = co.F0[static_cast<std::size_t>(i) * Q + q];
            }
            continue;
        }
        for (int q = 0; q < Q; ++q) {
            double e11 = 0.0, e1 = 0.0, e12 = 0.0, e2 = 0.0, eF = 0.0;
            for (int j = 0; j < 4; ++j) {
                const double xr = L1 + (L1 - x) / (j + 1.0);
                e11 += ep.cj[j] * interp_uniform(dk11[q], a0, h, xr);
                e1 += ep.cj[j] * interp_uniform(dk1[q], a0, h, xr);
                e12 += ep.cj[j] * interp_uniform(ck12[q], a0, h, xr);
                e2 += ep.cj[j] * interp_uniform(ck2[q], a0, h, xr);
                eF += ep.cj[j] * interp_uniform(cF0[q], a0, h, xr);
            }
            ep.coeffs.k11[off + q] = ext.a11[i] + e11;
            ep.coeffs.k1[off + q] = ext.a1[i] + e1;
            ep.coeffs.k12[off + q] = e12;
            ep.coeffs.k2[off + q] = e2;
            ep.coeffs.F0[off + q] = eF;
        }
    }
    return ep;
}

inline std::pair<Field2D, LinearCertificate>
solve_extended(const ExtendedProblem& ep, const SigmaSchedule& sch) {
    return solve_linear(ep.coeffs, sch, ep.d0, true);
}

// restriction of an extended-domain field back to the physical cylinder
inline Field2D restrict_field(const Field2D& big, int base_M) {
    if (base_M > big.M()) throw DimensionMismatch("restrict_field: base grid larger than field");
    Grid1D g(big.grid.a, big.grid.x(base_M - 1), base_M);
    Field2D out(g, big.basis);
    for (int i = 0; i < base_M; ++i)
        for (int j = 0; j < big.N(); ++j) out.a(i, j) = big.a(i, j);
    return out;
}

// coefficient set of the pure background linearization on a given flow
inline CoefficientSet background_coefficient_set(const BackgroundFlow1D& flow,
                                                 std::shared_ptr<const RadialBasis> basis) {
    CoefficientSet co;
    co.grid = flow.grid;
    co.basis = std::move(basis);
    const int M = co.M(), Q = co.Q();
    co.k11.assign(static_cast<std::size_t>(M) * Q, 0.0);
    co.k12.assign(static_cast<std::size_t>(M) * Q, 0.0);
    co.k1.assign(static_cast<std::size_t>(M) * Q, 0.0);
    co.k2.assign(static_cast<std::size_t>(M) * Q, 0.0);
    co.F0.assign(static_cast<std::size_t>(M) * Q, 0.0);
    for (int i = 0; i < M; ++i)
        for (int q = 0; q < Q; ++q) {
            co.k11[static_cast<std::size_t>(i) * Q + q] = flow.k11[i];
            co.k1[static_cast<std::size_t>(i) * Q + q] = flow.k1[i];
        }
    co.compat = check_compatibilities(co);
    return co;
}

} // namespace transonic

#endif
