#pragma once

#include <cmath>
#include <vector>

#include "frame.hpp"
#include "matrix.hpp"
#include "sign_projector.hpp"

namespace indexlab {

// Principal symbol data of a first-order formally self-adjoint elliptic
// operator at one boundary point: the symbol at the outward unit conormal n
// and at the positive unit tangent covector tau.  (n, tau) is a positively
// oriented coframe.  Derivatives map to covectors via d_v -> -i xi(v); this
// sign is pinned by the discrete Green identity test in the cylinder module
// and its negative control.
struct BoundarySymbolSample {
    Matrix sigma_n;
    Matrix sigma_tau;

    std::size_t size() const { return sigma_n.rows(); }

    void validate(double tol = 1e-10) const {
        if (!sigma_n.square() || !sigma_tau.square() || sigma_n.rows() != sigma_tau.rows())
            throw dimension_mismatch("symbol pair must be square of equal size");
        if (size() % 2 != 0)
            throw error("symbol size must be even");
        const double s = std::max(sigma_n.frobenius_norm(), 1.0);
        if (sigma_n.hermitian_defect() > tol * s || sigma_tau.hermitian_defect() > tol * s)
            throw not_hermitian("symbol samples must be Hermitian");
    }
};

// Invariant splitting E = E+ (+) E- of b = sigma_n^{-1} sigma_tau by the
// sign of the imaginary part of its eigenvalues.  The projectors are oblique
// (p_plus + p_minus = I along each other); the frames are orthonormal bases
// of the two ranges.
struct Splitting {
    Matrix p_plus;
    Matrix p_minus;
    Matrix frame_plus;
    Matrix frame_minus;
    Matrix b;
};

inline Matrix boundary_endomorphism(const BoundarySymbolSample& sample) {
    Eigen::PartialPivLU<EMat> lu(EMat(sample.sigma_n.eigen()));
    const double piv = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(piv > 1e-12 * std::max(sample.sigma_n.frobenius_norm(), 1.0)))
        throw not_elliptic("sigma_n is singular");
    return Matrix::from_eigen(lu.solve(EMat(sample.sigma_tau.eigen())));
}

inline Splitting split(const BoundarySymbolSample& sample) {
    sample.validate();
    const Matrix b = boundary_endomorphism(sample);
    Matrix p_plus;
    try {
        p_plus = upper_half_projector(b);
    } catch (const singular_iterate&) {
        throw not_elliptic("boundary endomorphism has spectrum on the real axis");
    } catch (const no_convergence&) {
        throw not_elliptic("boundary endomorphism has spectrum on the real axis");
    }
    const auto n = static_cast<Eigen::Index>(b.rows());
    Matrix p_minus = Matrix::from_eigen(EMat::Identity(n, n) - p_plus.eigen());

    auto range_frame = [](const Matrix& p, std::size_t rank_hint) {
        Eigen::JacobiSVD<EMat> svd(p.eigen(), Eigen::ComputeThinU);
        std::vector<EVec> cols;
        for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
            if (svd.singularValues()(j) > 0.5) cols.push_back(svd.matrixU().col(j));
        }
        if (cols.size() != rank_hint)
            throw not_elliptic("splitting ranks are unequal");
        Matrix f(p.rows(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            f.eigen().col(static_cast<Eigen::Index>(j)) = cols[j];
        return f;
    };
    const std::size_t m = sample.size() / 2;
    Splitting s;
    s.frame_plus = range_frame(p_plus, m);
    s.frame_minus = range_frame(p_minus, m);
    s.p_plus = std::move(p_plus);
    s.p_minus = std::move(p_minus);
    s.b = b;
    return s;
}

inline cplx symplectic_form(const Matrix& sigma_n, const EVec& u, const EVec& v) {
    if (sigma_n.rows() != static_cast<std::size_t>(u.size()) ||
        sigma_n.rows() != static_cast<std::size_t>(v.size()))
        throw dimension_mismatch("symplectic_form dimensions");
    return v.dot(cplx(0, 1) * (sigma_n.eigen() * u));
}

inline cplx symplectic_form(const Matrix& sigma_n, const std::vector<cplx>& u,
                            const std::vector<cplx>& v) {
    EVec eu(static_cast<Eigen::Index>(u.size())), ev(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < u.size(); ++i) eu(static_cast<Eigen::Index>(i)) = u[i];
    for (std::size_t i = 0; i < v.size(); ++i) ev(static_cast<Eigen::Index>(i)) = v[i];
    return symplectic_form(sigma_n, eu, ev);
}

// True iff the frame spans a maximal isotropic (hence Lagrangian) subspace
// for omega(u, v) = <i sigma_n u, v>.
inline bool check_lagrangian(const Matrix& sigma_n, const Matrix& frame, double tol = 1e-8) {
    if (sigma_n.rows() != frame.rows())
        throw dimension_mismatch("check_lagrangian dimensions");
    if (frame.cols() != sigma_n.rows() / 2) return false;
    EMat omega = frame.eigen().adjoint() * (cplx(0, 1) * sigma_n.eigen()) * frame.eigen();
    return omega.cwiseAbs().maxCoeff() <= tol;
}

// Ellipticity probe used by property tests: t -> det(t sigma_n + sigma_tau)
// must not vanish for real t.  Checks a 1001-point grid on [-10, 10] plus
// nonvanishing of the leading coefficient det(sigma_n).
inline bool elliptic_on_grid(const BoundarySymbolSample& sample) {
    const double lead = std::abs(cplx(sample.sigma_n.eigen().determinant()));
    if (lead < 1e-12) return false;
    for (int k = 0; k <= 1000; ++k) {
        const double t = -10.0 + 0.02 * k;
        EMat m = t * sample.sigma_n.eigen() + sample.sigma_tau.eigen();
        if (std::abs(cplx(m.determinant())) < 1e-12) return false;
    }
    return true;
}

// Boundary symbol of the model cylinder operator with m channels per
// chirality.  Component 0 is the t = 0 circle (outward conormal -dt),
// component 1 is t = 1 (+dt); the tangent covector is chosen so (n, tau)
// is positively oriented against dt ^ dtheta.  Both components then share
// the boundary endomorphism b = i s3 (x) I_m, so E+ is the first-channel
// block at either end.
inline BoundarySymbolSample dirac_sample(int component, std::size_t m = 1) {
    if (component != 0 && component != 1)
        throw index_out_of_range("boundary component must be 0 or 1");
    const double s = component == 0 ? 1.0 : -1.0;
    const Matrix s1{{cplx(0), cplx(s)}, {cplx(s), cplx(0)}};
    const Matrix s2{{cplx(0), cplx(0, -s)}, {cplx(0, s), cplx(0)}};
    const Matrix im = Matrix::identity(m);
    return BoundarySymbolSample{kron(s1, im), kron(s2, im)};
}

}  // namespace indexlab
