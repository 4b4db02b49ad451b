#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "matrix.hpp"

namespace indexlab {

// Upwind summation-by-parts pair on n_intervals + 1 nodes of [0, 1].
// d_plus and d_minus are first-derivative operators biased in opposite
// directions, tied by the mirror relation D- = -R D+ R and the exact
// identity H D+ + D-^T H = B with B = diag(-1, 0, ..., 0, +1).
struct SbpPair {
    Matrix d_plus;
    Matrix d_minus;
    std::vector<double> h_weights;
    Matrix boundary;
    double h = 0.0;
};

namespace detail {

// Top boundary closure rows of the plus-biased difference quadrature,
// parametrized so that rows sum to zero and the pair identity below holds
// exactly; the two free parameters are fixed project-wide.
inline void fill_top_closure(Eigen::MatrixXd& q, double w2, double g22) {
    const double g23 = 2.0, g24 = -0.5;
    q(0, 0) = g22 + 2 * g23 + 3 * g24 - 7.0 / 4.0;
    q(0, 1) = -2 * g22 - 3 * g23 - 4 * g24 - w2 + 13.0 / 4.0;
    q(0, 2) = g22 + w2;
    q(0, 3) = g23 - 2.0;
    q(0, 4) = g24 + 0.5;
    q(1, 0) = -2 * g22 - 4 * g23 - 6 * g24 + w2 + 3.0 / 4.0;
    q(1, 1) = 4 * g22 + 6 * g23 + 8 * g24 - 13.0 / 4.0;
    q(1, 2) = -2 * g22 - w2;
    q(1, 3) = 3.5 - 2 * g23;
    q(1, 4) = -2 * g24 - 1.0;
    q(2, 0) = g22 + 2 * g23 + 3 * g24 - w2;
    q(2, 1) = -2 * g22 - 3 * g23 - 4 * g24 + w2;
    q(2, 2) = g22;
    q(2, 3) = g23;
    q(2, 4) = g24;
}

}  // namespace detail

inline SbpPair upwind_pair(std::size_t n_intervals) {
    if (n_intervals < 7) throw grid_too_coarse("axial grid needs at least 7 intervals");
    const double w2 = 1.0, g22 = -1.5;
    const auto n = static_cast<Eigen::Index>(n_intervals + 1);
    const double h = 1.0 / static_cast<double>(n_intervals);

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    detail::fill_top_closure(q, w2, g22);
    for (Eigen::Index j = 3; j < n - 3; ++j) {
        q(j, j) = -1.5;
        q(j, j + 1) = 2.0;
        q(j, j + 2) = -0.5;
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    b(0, 0) = -1.0;
    b(n - 1, n - 1) = 1.0;
    // bottom closure: rows of B + R Q^T R, with Q read before the overwrite
    const Eigen::MatrixXd q_top = q;
    for (Eigen::Index i = n - 3; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            q(i, j) = b(i, j) + q_top(n - 1 - j, n - 1 - i);

    const double w0 = w2 - 0.75, w1 = 3.25 - 2.0 * w2;
    std::vector<double> hw(static_cast<std::size_t>(n), h);
    hw[0] = w0 * h;
    hw[1] = w1 * h;
    hw[2] = w2 * h;
    hw[static_cast<std::size_t>(n) - 1] = w0 * h;
    hw[static_cast<std::size_t>(n) - 2] = w1 * h;
    hw[static_cast<std::size_t>(n) - 3] = w2 * h;

    Eigen::MatrixXd dp = q;
    for (Eigen::Index i = 0; i < n; ++i) dp.row(i) /= hw[static_cast<std::size_t>(i)];
    Eigen::MatrixXd dm(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) dm(i, j) = -dp(n - 1 - i, n - 1 - j);

    SbpPair out;
    out.d_plus = Matrix::from_eigen(dp.cast<cplx>());
    out.d_minus = Matrix::from_eigen(dm.cast<cplx>());
    out.h_weights = std::move(hw);
    out.boundary = Matrix::from_eigen(b.cast<cplx>());
    out.h = h;
    return out;
}

// Largest entry of H D+ + D-^T H - B; zero up to rounding by construction.
inline double sbp_pair_defect(const SbpPair& p) {
    const auto n = static_cast<Eigen::Index>(p.h_weights.size());
    EMat lhs = p.d_plus.eigen();
    for (Eigen::Index i = 0; i < n; ++i) lhs.row(i) *= p.h_weights[static_cast<std::size_t>(i)];
    EMat rhs = p.d_minus.eigen().transpose();
    for (Eigen::Index j = 0; j < n; ++j) rhs.col(j) *= p.h_weights[static_cast<std::size_t>(j)];
    return (lhs + rhs - p.boundary.eigen()).cwiseAbs().maxCoeff();
}

// Largest eigenvalue of Q + Q^T - B for the plus operator; nonpositive to
// rounding, which is what damps the one-sided stencils.
inline double upwind_dissipation_bound(const SbpPair& p) {
    const auto n = static_cast<Eigen::Index>(p.h_weights.size());
    EMat q = p.d_plus.eigen();
    for (Eigen::Index i = 0; i < n; ++i) q.row(i) *= p.h_weights[static_cast<std::size_t>(i)];
    Matrix s = Matrix::from_eigen(EMat(q + q.adjoint() - p.boundary.eigen()));
    const auto ev = hermitian_eigenvalues(s);
    return ev.back();
}

// Spectral differentiation matrix for 2 pi periodic functions on an odd
// number of equispaced nodes; differentiates every resolvable Fourier mode
// exactly and has a real skew-symmetric circulant form.
inline Matrix circle_derivative(std::size_t n_theta) {
    if (n_theta < 3 || n_theta % 2 == 0)
        throw nyquist_violation("angular node count must be odd and at least 3");
    const auto n = static_cast<Eigen::Index>(n_theta);
    EMat d = EMat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (j == k) continue;
            const auto diff = static_cast<int>(j - k);
            const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
            d(j, k) = sign / (2.0 * std::sin(std::numbers::pi * diff / static_cast<double>(n)));
        }
    }
    return Matrix::from_eigen(d);
}

}  // namespace indexlab
