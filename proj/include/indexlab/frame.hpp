#pragma once

#include <cmath>
#include <vector>

#include "matrix.hpp"

namespace indexlab {

// Modified Gram-Schmidt with a second re-orthogonalization pass whenever a
// vector loses more than half its norm against the accepted frame.  Input
// vectors must be linearly independent relative to tol.
inline std::vector<EVec> orthonormal_frame_e(const std::vector<EVec>& vectors, double tol = 1e-12) {
    std::vector<EVec> out;
    out.reserve(vectors.size());
    for (const EVec& v0 : vectors) {
        EVec v = v0;
        const double original = v.norm();
        if (original == 0.0) throw rank_deficient("zero input vector");
        for (int pass = 0; pass < 2; ++pass) {
            for (const EVec& q : out) v -= (q.dot(v)) * q;
            if (v.norm() > 0.5 * original) break;
        }
        const double nv = v.norm();
        if (nv <= tol * original) throw rank_deficient("input vectors not independent");
        out.push_back(v / nv);
    }
    return out;
}

inline std::vector<std::vector<cplx>> orthonormal_frame(const std::vector<std::vector<cplx>>& vectors,
                                                        double tol = 1e-12) {
    std::vector<EVec> in;
    in.reserve(vectors.size());
    for (const auto& v : vectors) {
        EVec e(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
        in.push_back(std::move(e));
    }
    auto frame = orthonormal_frame_e(in, tol);
    std::vector<std::vector<cplx>> out;
    out.reserve(frame.size());
    for (const auto& q : frame)
        out.emplace_back(q.data(), q.data() + q.size());
    return out;
}

// Columns of M as an orthonormal frame.
inline Matrix orthonormal_columns(const Matrix& M, double tol = 1e-12) {
    std::vector<EVec> cols;
    for (std::size_t j = 0; j < M.cols(); ++j)
        cols.push_back(M.eigen().col(static_cast<Eigen::Index>(j)));
    auto frame = orthonormal_frame_e(cols, tol);
    Matrix out(M.rows(), frame.size());
    for (std::size_t j = 0; j < frame.size(); ++j)
        out.eigen().col(static_cast<Eigen::Index>(j)) = frame[j];
    return out;
}

// Orthogonal projector onto the span of the frame columns.
inline Matrix frame_projector(const Matrix& frame) {
    return Matrix::from_eigen(frame.eigen() * frame.eigen().adjoint());
}

}  // namespace indexlab
