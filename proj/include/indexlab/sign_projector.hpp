#pragma once

#include <cmath>

#include "matrix.hpp"

namespace indexlab {

// Spectral projector onto the generalized eigenspaces of B with positive
// imaginary part, computed by the scaled Newton iteration for the matrix
// sign function applied to -iB.  Determinant scaling keeps the iterate
// count low; the iteration diverges (or an iterate goes singular) exactly
// when B has spectrum too close to the real axis, which is the signal the
// symbol calculus uses to reject non-elliptic input.
inline Matrix upper_half_projector(const Matrix& B, double tol = 1e-12, int max_iter = 100) {
    if (!B.square()) throw dimension_mismatch("upper_half_projector needs a square matrix");
    const auto n = static_cast<Eigen::Index>(B.rows());
    EMat S = cplx(0, -1) * B.eigen();
    const double scale = S.norm();
    if (scale == 0.0) throw singular_iterate("zero matrix has spectrum on the real axis");
    for (int it = 0; it < max_iter; ++it) {
        Eigen::PartialPivLU<EMat> lu(S);
        const double rcond_proxy = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(rcond_proxy > 1e-14 * scale))
            throw singular_iterate("sign iterate numerically singular");
        EMat Sinv = lu.inverse();
        cplx det = lu.determinant();
        double mu = std::pow(std::abs(det), -1.0 / static_cast<double>(n));
        if (!std::isfinite(mu) || mu <= 0.0) mu = 1.0;
        EMat next = 0.5 * (mu * S + (1.0 / mu) * Sinv);
        const double step = (next - S).norm();
        S = next;
        if (step <= tol * S.norm()) {
            EMat P = 0.5 * (EMat::Identity(n, n) + S);
            return Matrix::from_eigen(P);
        }
    }
    throw no_convergence("sign iteration did not converge");
}

// The sign matrix itself (S with S^2 = I), for callers that want both halves.
inline Matrix sign_matrix(const Matrix& B, double tol = 1e-12, int max_iter = 100) {
    Matrix P = upper_half_projector(B, tol, max_iter);
    return Matrix::from_eigen(2.0 * P.eigen() - EMat::Identity(P.eigen().rows(), P.eigen().cols()));
}

}  // namespace indexlab
