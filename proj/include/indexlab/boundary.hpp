#pragma once

#include <cmath>
#include <string>

#include "symbol.hpp"

namespace indexlab {

// Subspace L of the boundary fiber, stored as an orthonormal frame.
struct BoundaryConditionL {
    Matrix frame;
};

// Automorphism T of E- written in the coordinates of the splitting's
// minus frame.
struct AutomorphismT {
    Matrix matrix;
};

enum class Definiteness { PositiveDefinite, NegativeDefinite, Indefinite };

struct TransversalityReport {
    double angle_plus = 0.0;
    double angle_minus = 0.0;
    bool full_rank = false;
    bool elliptic = false;
};

namespace detail {

inline double min_principal_angle(const Matrix& a, const Matrix& b) {
    if (a.cols() == 0 || b.cols() == 0) return 2.0;  // empty subspaces are transversal
    EMat g = a.eigen().adjoint() * b.eigen();
    Eigen::JacobiSVD<EMat> svd(g);
    const double smax = std::min(1.0, svd.singularValues().maxCoeff());
    return std::acos(smax);
}

inline void require_invertible(const Matrix& t, double tol, const char* what) {
    Eigen::JacobiSVD<EMat> svd(t.eigen());
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return;
    if (sv.minCoeff() <= tol * std::max(sv.maxCoeff(), 1.0))
        throw not_invertible(what);
}

}  // namespace detail

// L = Ker P_T with P_T = P+ (1 + i sigma(n)^{-1} T P-).  Solved in closed
// form: writing u = F- a + F+ c, ker membership forces
// F+ c = -i P+ sigma(n)^{-1} F- T a, so L is spanned by the columns of
// F- - i P+ sigma(n)^{-1} F- T.
inline BoundaryConditionL t_to_l(const BoundarySymbolSample& sample, const Splitting& split,
                                 const AutomorphismT& t, double tol = 1e-10) {
    const std::size_t m = sample.size() / 2;
    if (t.matrix.rows() != m || t.matrix.cols() != m)
        throw dimension_mismatch("automorphism size must match the splitting rank");
    detail::require_invertible(t.matrix, tol, "boundary automorphism is singular");
    Eigen::PartialPivLU<EMat> lu(EMat(sample.sigma_n.eigen()));
    EMat sn_inv_fm = lu.solve(EMat(split.frame_minus.eigen()));
    EMat raw = split.frame_minus.eigen() -
               cplx(0, 1) * (split.p_plus.eigen() * sn_inv_fm) * t.matrix.eigen();
    return BoundaryConditionL{orthonormal_columns(Matrix::from_eigen(raw))};
}

inline TransversalityReport check_elliptic_bc(const Splitting& split, const BoundaryConditionL& l,
                                              double angle_threshold = 1e-6) {
    const Matrix& f = l.frame;
    if (f.rows() != split.frame_minus.rows())
        throw dimension_mismatch("boundary condition frame size");
    TransversalityReport r;
    r.full_rank = (f.cols() == split.frame_minus.cols());
    r.angle_plus = detail::min_principal_angle(f, split.frame_plus);
    r.angle_minus = detail::min_principal_angle(f, split.frame_minus);
    r.elliptic = r.full_rank && r.angle_plus > angle_threshold && r.angle_minus > angle_threshold;
    return r;
}

// Inverse of t_to_l by direct inversion of the kernel description: with
// per-column coordinates a = F-* P- g and c = F+* P+ g, the automorphism is
// T = i K^{-1} C A^{-1} where K = F+* P+ sigma(n)^{-1} F-.
inline AutomorphismT l_to_t(const BoundarySymbolSample& sample, const Splitting& split,
                            const BoundaryConditionL& l, double angle_threshold = 1e-6) {
    const auto report = check_elliptic_bc(split, l, angle_threshold);
    if (!report.elliptic)
        throw not_elliptic("boundary condition is not transversal to the splitting");
    EMat g = l.frame.eigen();
    EMat a = split.frame_minus.eigen().adjoint() * (split.p_minus.eigen() * g);
    EMat c = split.frame_plus.eigen().adjoint() * (split.p_plus.eigen() * g);
    Eigen::PartialPivLU<EMat> lu_sn(EMat(sample.sigma_n.eigen()));
    EMat k = split.frame_plus.eigen().adjoint() *
             (split.p_plus.eigen() * lu_sn.solve(EMat(split.frame_minus.eigen())));
    Eigen::PartialPivLU<EMat> lu_k(k);
    if (lu_k.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-12)
        throw not_elliptic("conormal pairing between the splitting halves is degenerate");
    Eigen::PartialPivLU<EMat> lu_a(a);
    if (lu_a.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-12)
        throw not_elliptic("boundary condition touches E+");
    EMat t = cplx(0, 1) * lu_k.solve(EMat(c * lu_a.inverse()));
    return AutomorphismT{Matrix::from_eigen(t)};
}

inline void require_selfadjoint(const Matrix& t, double tol = 1e-10) {
    if (t.hermitian_defect() > tol * std::max(t.frobenius_norm(), 1.0))
        throw not_selfadjoint("automorphism is not self-adjoint");
}

// Frame of the negative eigenspace of T, in E- coordinates (m x r).
inline Matrix f_subspace(const AutomorphismT& t, double tol = 1e-10) {
    require_selfadjoint(t.matrix, tol);
    const auto eig = hermitian_eig(t.matrix);
    const double scale = eig.eigenvalues.empty()
                             ? 1.0
                             : std::max(std::abs(eig.eigenvalues.front()),
                                        std::abs(eig.eigenvalues.back()));
    std::size_t r = 0;
    for (double lam : eig.eigenvalues) {
        if (std::abs(lam) <= tol * std::max(scale, 1.0))
            throw not_invertible("automorphism has an eigenvalue at zero");
        if (lam < 0) ++r;
    }
    Matrix f(t.matrix.rows(), r);
    std::size_t col = 0;
    for (std::size_t j = 0; j < eig.eigenvalues.size(); ++j) {
        if (eig.eigenvalues[j] < 0) {
            f.eigen().col(static_cast<Eigen::Index>(col++)) =
                eig.eigenvectors.eigen().col(static_cast<Eigen::Index>(j));
        }
    }
    return f;
}

inline Definiteness classify(const AutomorphismT& t, double tol = 1e-10) {
    require_selfadjoint(t.matrix, tol);
    const auto ev = hermitian_eigenvalues(t.matrix);
    if (ev.empty()) return Definiteness::PositiveDefinite;
    const double scale = std::max({std::abs(ev.front()), std::abs(ev.back()), 1.0});
    for (double lam : ev)
        if (std::abs(lam) <= tol * scale)
            throw zero_eigenvalue("automorphism eigenvalue at zero within tolerance");
    if (ev.front() > 0) return Definiteness::PositiveDefinite;
    if (ev.back() < 0) return Definiteness::NegativeDefinite;
    return Definiteness::Indefinite;
}

// Concrete boundary-condition frame of the model cylinder operator.  For the
// splitting of dirac_sample(component, m) the closed-form kernel frame is the
// orthonormalization of [sgn * T; I] with sgn = -i at component 0 and +i at
// component 1; this is what the assembly stage uses nodewise.
inline Matrix lagrangian_frame(const Matrix& t, int component) {
    if (!t.square()) throw dimension_mismatch("automorphism must be square");
    if (component != 0 && component != 1)
        throw index_out_of_range("boundary component must be 0 or 1");
    const std::size_t m = t.rows();
    const cplx sgn = component == 0 ? cplx(0, -1) : cplx(0, 1);
    Matrix stacked(2 * m, m);
    stacked.eigen().topRows(static_cast<Eigen::Index>(m)) = sgn * t.eigen();
    stacked.eigen().bottomRows(static_cast<Eigen::Index>(m)) =
        EMat::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    return orthonormal_columns(stacked);
}

}  // namespace indexlab
