#ifndef TRANSONIC_FIELD_HPP
#define TRANSONIC_FIELD_HPP

#include <memory>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/grid.hpp"
#include "transonic/radial_basis.hpp"

namespace transonic {

// Scalar field on (L0, L1) x (0, 1), stored as modal coefficients A_j(x1_i)
// in the radial eigenbasis. Layout: A[i * N + j], i = x1 node, j = mode.
struct Field2D {
    Grid1D grid;
    std::shared_ptr<const RadialBasis> basis;
    std::vector<double> A;

    Field2D() = default;
    Field2D(const Grid1D& g, std::shared_ptr<const RadialBasis> b)
        : grid(g), basis(std::move(b)), A(static_cast<std::size_t>(grid.n) * basis->N, 0.0) {}

    int N() const { return basis->N; }
    int M() const { return grid.n; }
    double& a(int i, int j) { return A[static_cast<std::size_t>(i) * basis->N + j]; }
    double a(int i, int j) const { return A[static_cast<std::size_t>(i) * basis->N + j]; }

    // sample at node i, quadrature point q, using a basis sample array
    double eval(int i, int q, const std::vector<double>& bas) const {
        const int n = basis->N, Q = basis->Q();
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += A[static_cast<std::size_t>(i) * n + j] * bas[static_cast<std::size_t>(j) * Q + q];
        return s;
    }
    double value(int i, int q) const { return eval(i, q, basis->b); }
    double dr(int i, int q) const { return eval(i, q, basis->d1); }

    // value at arbitrary radius (nodal i), through the cylinder functions
    double value_at_r(int i, double r) const {
        double s = 0.0;
        for (int j = 0; j < basis->N; ++j) s += a(i, j) * basis->value_at(j, r);
        return s;
    }

    // nodal sample table, size M * Q, row-major in i
    std::vector<double> nodal() const {
        const int Q = basis->Q();
        std::vector<double> out(static_cast<std::size_t>(M()) * Q);
        for (int i = 0; i < M(); ++i)
            for (int q = 0; q < Q; ++q) out[static_cast<std::size_t>(i) * Q + q] = value(i, q);
        return out;
    }

    // per-mode x1 derivative of the coefficient functions, same layout
    std::vector<double> x1_derivative(int order) const {
        const int n = basis->N;
        std::vector<double> out(A.size(), 0.0);
        std::vector<double> col(M());
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < M(); ++i) col[i] = a(i, j);
            const std::vector<double> d = fd_derivative(col, grid.h(), order);
            for (int i = 0; i < M(); ++i) out[static_cast<std::size_t>(i) * n + j] = d[i];
        }
        return out;
    }
};

inline Field2D field_from_samples(const Grid1D& grid, std::shared_ptr<const RadialBasis> basis,
                                  const std::vector<double>& samples) {
    const int Q = basis->Q();
    if (samples.size() != static_cast<std::size_t>(grid.n) * Q)
        throw DimensionMismatch("field_from_samples: sample table has wrong size");
    Field2D f(grid, std::move(basis));
    std::vector<double> row(Q);
    for (int i = 0; i < grid.n; ++i) {
        for (int q = 0; q < Q; ++q) row[q] = samples[static_cast<std::size_t>(i) * Q + q];
        const std::vector<double> a = project(*f.basis, row);
        for (int j = 0; j < f.N(); ++j) f.a(i, j) = a[j];
    }
    return f;
}

inline Field2D field_axpy(double alpha, const Field2D& x, const Field2D& y) {
    if (x.A.size() != y.A.size()) throw DimensionMismatch("field_axpy: incompatible fields");
    Field2D out = y;
    for (std::size_t k = 0; k < out.A.size(); ++k) out.A[k] += alpha * x.A[k];
    return out;
}

inline Field2D field_scale(double alpha, const Field2D& x) {
    Field2D out = x;
    for (double& v : out.A) v *= alpha;
    return out;
}

} // namespace transonic

#endif
