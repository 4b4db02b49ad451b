#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "indexlab/matrix.hpp"

namespace testutil {

using indexlab::cplx;
using indexlab::EMat;
using indexlab::Matrix;

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

inline bool approx_matrix(const Matrix& a, const Matrix& b, double tol = 1e-12) {
    return max_abs_diff(a, b) <= tol;
}

inline double unitarity_defect(const Matrix& u) {
    const auto n = static_cast<Eigen::Index>(u.cols());
    return (u.eigen().adjoint() * u.eigen() - EMat::Identity(n, n)).norm();
}

// Deterministic random matrices; every test that draws randomness seeds its
// own generator so failures reproduce exactly.
inline Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx(nd(rng), nd(rng));
    return m;
}

inline Matrix random_hermitian(std::mt19937& rng, std::size_t n) {
    Matrix a = random_matrix(rng, n, n);
    return Matrix::from_eigen(0.5 * (a.eigen() + a.eigen().adjoint()));
}

inline Matrix random_unitary(std::mt19937& rng, std::size_t n) {
    Matrix a = random_matrix(rng, n, n);
    Eigen::HouseholderQR<EMat> qr(a.eigen());
    EMat q = qr.householderQ() * EMat::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
    return Matrix::from_eigen(q);
}

}  // namespace testutil
