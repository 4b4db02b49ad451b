#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace indexlab {

// Orthonormal frames spanning a subbundle of E- over one boundary torus,
// sampled on the half-open (theta, s) lattice.  frames[i][j] lives at
// theta_i = 2 pi i / n_theta, s_j = j / n_s.
struct TorusSubbundleField {
    std::size_t n_theta = 0;
    std::size_t n_s = 0;
    std::vector<std::vector<Matrix>> frames;
    int component_id = 0;
    int orientation = 1;

    std::size_t rank() const {
        return frames.empty() || frames.front().empty() ? 0 : frames.front().front().cols();
    }

    void validate(double tol = 1e-10) const {
        if (frames.size() != n_theta) throw dimension_mismatch("field theta extent");
        const std::size_t r = rank();
        for (std::size_t i = 0; i < n_theta; ++i) {
            if (frames[i].size() != n_s) throw dimension_mismatch("field s extent");
            for (std::size_t j = 0; j < n_s; ++j) {
                const Matrix& f = frames[i][j];
                if (f.cols() != r)
                    throw rank_jump("subbundle rank changes at node (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
                if (r == 0) continue;
                EMat g = f.eigen().adjoint() * f.eigen() -
                         EMat::Identity(static_cast<Eigen::Index>(r),
                                        static_cast<Eigen::Index>(r));
                if (g.cwiseAbs().maxCoeff() > tol)
                    throw error("field frame is not orthonormal at node (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
            }
        }
    }
};

struct PlaquetteFlux {
    std::size_t i = 0;
    std::size_t j = 0;
    double flux = 0.0;
};

struct PlaquetteSummary {
    long chern_raw = 0;          // before the orientation sign
    double residue = 0.0;
    double min_link = 1.0;
    std::vector<PlaquetteFlux> fluxes;
};

// Lattice first Chern number by plaquette fluxes of link determinants.
// Gauge invariant; the flux sum is 2 pi times an integer by construction,
// so the residue only guards arithmetic. Links weaker than the floor mean
// the lattice is too coarse to trust.
inline PlaquetteSummary plaquette_fluxes(const TorusSubbundleField& field,
                                         double link_floor = 0.1, double residue_cap = 1e-3) {
    field.validate();
    PlaquetteSummary out;
    if (field.rank() == 0) {
        return out;
    }
    const std::size_t ni = field.n_theta, nj = field.n_s;
    auto link = [&](std::size_t ia, std::size_t ja, std::size_t ib, std::size_t jb) {
        EMat g = field.frames[ia][ja].eigen().adjoint() * field.frames[ib][jb].eigen();
        return cplx(g.determinant());
    };
    double total = 0.0;
    out.fluxes.reserve(ni * nj);
    for (std::size_t i = 0; i < ni; ++i) {
        for (std::size_t j = 0; j < nj; ++j) {
            const std::size_t i1 = (i + 1) % ni, j1 = (j + 1) % nj;
            const cplx u1 = link(i, j, i1, j);
            const cplx u2 = link(i1, j, i1, j1);
            const cplx u3 = link(i, j1, i1, j1);
            const cplx u4 = link(i, j, i, j1);
            for (cplx u : {u1, u2, u3, u4})
                out.min_link = std::min(out.min_link, std::abs(u));
            const double flux = std::arg(u1 * u2 * std::conj(u3) * std::conj(u4));
            out.fluxes.push_back({i, j, flux});
            total += flux;
        }
    }
    if (out.min_link <= link_floor)
        throw grid_too_coarse("plaquette link determinant below floor");
    const double c = total / (2.0 * std::numbers::pi);
    out.chern_raw = std::lround(c);
    out.residue = std::abs(c - static_cast<double>(out.chern_raw));
    if (out.residue > residue_cap)
        throw grid_too_coarse("plaquette flux sum is not near an integer");
    return out;
}

inline long chern_number(const TorusSubbundleField& field) {
    return field.orientation * plaquette_fluxes(field).chern_raw;
}

// Frame of the negative eigenspace of a Hermitian matrix, ambient
// coordinates.  Used to sample subbundle fields from automorphism data.
inline Matrix lower_band_frame(const Matrix& t, double zero_tol = 1e-10) {
    const auto eig = hermitian_eig(t);
    const double scale = eig.eigenvalues.empty()
                             ? 1.0
                             : std::max({std::abs(eig.eigenvalues.front()),
                                         std::abs(eig.eigenvalues.back()), 1.0});
    std::size_t r = 0;
    for (double lam : eig.eigenvalues) {
        if (std::abs(lam) <= zero_tol * scale)
            throw zero_eigenvalue("band splitting degenerates");
        if (lam < 0) ++r;
    }
    Matrix f(t.rows(), r);
    std::size_t col = 0;
    for (std::size_t j = 0; j < eig.eigenvalues.size(); ++j)
        if (eig.eigenvalues[j] < 0)
            f.eigen().col(static_cast<Eigen::Index>(col++)) =
                eig.eigenvectors.eigen().col(static_cast<Eigen::Index>(j));
    return f;
}

}  // namespace indexlab
