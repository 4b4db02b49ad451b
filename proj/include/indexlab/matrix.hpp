#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#ifdef INDEXLAB_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

#include "errors.hpp"

namespace indexlab {

using cplx = std::complex<double>;
using EMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

// Dense complex matrix, row-major storage. Entries are checked finite on
// construction; every fiber endomorphism in the toolkit lives here.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, cplx(0)) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_)
            throw dimension_mismatch("entry count does not match rows*cols");
        check_finite();
    }

    Matrix(std::initializer_list<std::initializer_list<cplx>> lst) {
        rows_ = lst.size();
        cols_ = rows_ ? lst.begin()->size() : 0;
        entries_.reserve(rows_ * cols_);
        for (const auto& row : lst) {
            if (row.size() != cols_)
                throw dimension_mismatch("ragged initializer");
            for (const auto& v : row) entries_.push_back(v);
        }
        check_finite();
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx(1);
        return m;
    }

    static Matrix from_eigen(const Eigen::Ref<const EMat>& e) {
        Matrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
        EMat::Map(m.entries_.data(), e.rows(), e.cols()) = e;
        m.check_finite();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<cplx>& entries() const { return entries_; }

    Eigen::Map<const EMat> eigen() const {
        return Eigen::Map<const EMat>(entries_.data(),
                                      static_cast<Eigen::Index>(rows_),
                                      static_cast<Eigen::Index>(cols_));
    }
    Eigen::Map<EMat> eigen() {
        return Eigen::Map<EMat>(entries_.data(),
                                static_cast<Eigen::Index>(rows_),
                                static_cast<Eigen::Index>(cols_));
    }

    Matrix adjoint() const { return from_eigen(eigen().adjoint()); }
    Matrix transpose() const { return from_eigen(eigen().transpose()); }
    Matrix conjugate() const { return from_eigen(eigen().conjugate()); }

    double frobenius_norm() const { return eigen().norm(); }
    double operator_norm() const {
        if (rows_ == 0 || cols_ == 0) return 0.0;
        Eigen::JacobiSVD<EMat> svd(eigen());
        return svd.singularValues()(0);
    }
    double hermitian_defect() const {
        if (!square()) throw dimension_mismatch("hermitian_defect needs a square matrix");
        return (eigen() - eigen().adjoint()).norm();
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        require_same_shape(a, b);
        return from_eigen(a.eigen() + b.eigen());
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        require_same_shape(a, b);
        return from_eigen(a.eigen() - b.eigen());
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw dimension_mismatch("matrix product shape");
        return from_eigen(a.eigen() * b.eigen());
    }
    friend Matrix operator*(cplx s, const Matrix& a) { return from_eigen(s * a.eigen()); }
    friend Matrix operator*(const Matrix& a, cplx s) { return from_eigen(s * a.eigen()); }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }

private:
    static void require_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw dimension_mismatch("shape mismatch");
    }
    void check_finite() const {
        for (const auto& v : entries_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw error("non-finite matrix entry");
    }

    std::size_t rows_, cols_;
    std::vector<cplx> entries_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            out(a.rows() + i, a.cols() + j) = b(i, j);
    return out;
}

// Hermitian eigendecomposition. Eigenvalues ascending; columns of vectors
// form a unitary matrix. The residual bound is part of the contract.
struct HermitianEigenResult {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

namespace detail {

#ifdef INDEXLAB_HAVE_LAPACKE
// Past this size the blocked LAPACK driver wins clearly over the Eigen
// tridiagonal QR path; below it the call overhead is not worth it.
inline constexpr std::size_t lapack_cutover = 128;

inline void lapack_hermitian_eig(const Matrix& H, bool want_vectors,
                                 std::vector<double>& values, Matrix& vectors) {
    const auto n = static_cast<lapack_int>(H.rows());
    EMat a = 0.5 * (H.eigen() + H.eigen().adjoint());
    values.assign(static_cast<std::size_t>(n), 0.0);
    const lapack_int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, want_vectors ? 'V' : 'N', 'L',
                                           n, a.data(), n, values.data());
    if (info != 0) throw no_convergence("zheevd failed to converge");
    if (want_vectors) vectors = Matrix::from_eigen(a);
}
#endif

}  // namespace detail

inline HermitianEigenResult hermitian_eig(const Matrix& H, double tol = 1e-10) {
    if (!H.square()) throw dimension_mismatch("hermitian_eig needs a square matrix");
    const double scale = H.frobenius_norm();
    if (H.hermitian_defect() > tol * std::max(scale, 1.0))
        throw not_hermitian("symmetry defect exceeds tolerance");
    HermitianEigenResult r;
#ifdef INDEXLAB_HAVE_LAPACKE
    if (H.rows() >= detail::lapack_cutover) {
        detail::lapack_hermitian_eig(H, true, r.eigenvalues, r.eigenvectors);
        return r;
    }
#endif
    Eigen::SelfAdjointEigenSolver<EMat> es(0.5 * (H.eigen() + H.eigen().adjoint()));
    if (es.info() != Eigen::Success)
        throw no_convergence("eigensolver failed");
    r.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
    r.eigenvectors = Matrix::from_eigen(es.eigenvectors());
    return r;
}

inline std::vector<double> hermitian_eigenvalues(const Matrix& H, double tol = 1e-10) {
    if (!H.square()) throw dimension_mismatch("hermitian_eigenvalues needs a square matrix");
    const double scale = H.frobenius_norm();
    if (H.hermitian_defect() > tol * std::max(scale, 1.0))
        throw not_hermitian("symmetry defect exceeds tolerance");
#ifdef INDEXLAB_HAVE_LAPACKE
    if (H.rows() >= detail::lapack_cutover) {
        std::vector<double> values;
        Matrix unused;
        detail::lapack_hermitian_eig(H, false, values, unused);
        return values;
    }
#endif
    Eigen::SelfAdjointEigenSolver<EMat> es(0.5 * (H.eigen() + H.eigen().adjoint()),
                                           Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw no_convergence("eigensolver failed");
    return std::vector<double>(es.eigenvalues().data(),
                               es.eigenvalues().data() + es.eigenvalues().size());
}

}  // namespace indexlab
