#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include "spectral_flow.hpp"

namespace indexlab {

// kappa(H) = (H - i)(H + i)^{-1}; unitary for Hermitian H, with the
// eigenvalue map lambda -> (lambda - i)/(lambda + i).
inline Matrix cayley(const Matrix& h) {
    if (!h.square()) throw dimension_mismatch("cayley input must be square");
    const auto n = static_cast<Eigen::Index>(h.rows());
    EMat plus = h.eigen() + cplx(0, 1) * EMat::Identity(n, n);
    EMat minus = h.eigen() - cplx(0, 1) * EMat::Identity(n, n);
    return Matrix::from_eigen(plus.partialPivLu().solve(minus));
}

struct UnitaryEigensystem {
    std::vector<double> phases;  // in (0, 2 pi), ascending
    Matrix vectors;              // matching columns
    double residual = 0.0;       // largest off-diagonal leak of the diagonalization
};

// Eigenphases of a unitary matrix through the commuting Hermitian pair
// C = (u + u*)/2 and S = (u - u*)/(2i): diagonalize C, then S inside each
// C-eigenspace, and read phases from the joint diagonal.  Phases are mapped
// to (0, 2 pi) so that -1 sits at pi in the interior.
inline UnitaryEigensystem unitary_eigenphases(const Matrix& u, double cluster_tol = 1e-8) {
    if (!u.square()) throw dimension_mismatch("eigenphase input must be square");
    const auto n = static_cast<Eigen::Index>(u.rows());
    Matrix c = Matrix::from_eigen(EMat(0.5 * (u.eigen() + u.eigen().adjoint())));
    Matrix s = Matrix::from_eigen(EMat((u.eigen() - u.eigen().adjoint()) / cplx(0, 2)));
    const auto ceig = hermitian_eig(c);

    EMat basis = ceig.eigenvectors.eigen();
    std::vector<double> cos_part(static_cast<std::size_t>(n)), sin_part(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k)
        cos_part[static_cast<std::size_t>(k)] = ceig.eigenvalues[static_cast<std::size_t>(k)];

    double residual = 0.0;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && std::abs(ceig.eigenvalues[static_cast<std::size_t>(stop)] -
                                    ceig.eigenvalues[static_cast<std::size_t>(stop - 1)]) <=
                               cluster_tol)
            ++stop;
        const Eigen::Index width = stop - start;
        EMat xc = basis.middleCols(start, width);
        EMat sblock = xc.adjoint() * (s.eigen() * xc);
        if (width == 1) {
            sin_part[static_cast<std::size_t>(start)] = sblock(0, 0).real();
            residual = std::max(residual, std::abs(sblock(0, 0).imag()));
        } else {
            const auto seig = hermitian_eig(Matrix::from_eigen(sblock));
            basis.middleCols(start, width) = xc * seig.eigenvectors.eigen();
            for (Eigen::Index k = 0; k < width; ++k)
                sin_part[static_cast<std::size_t>(start + k)] =
                    seig.eigenvalues[static_cast<std::size_t>(k)];
        }
        start = stop;
    }

    // verify the joint diagonalization against the unitary itself, one
    // eigenvector at a time: || u b_k - e^{i phi_k} b_k ||
    EMat image = u.eigen() * basis;
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx phase(cos_part[static_cast<std::size_t>(k)],
                         sin_part[static_cast<std::size_t>(k)]);
        residual = std::max(residual, (image.col(k) - phase * basis.col(k)).norm());
    }

    UnitaryEigensystem out;
    out.residual = residual;
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::vector<double> phases(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
        double phi = std::atan2(sin_part[k], cos_part[k]);
        if (phi <= 0) phi += 2.0 * std::numbers::pi;
        phases[k] = phi;
        order[k] = k;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&phases](std::size_t a, std::size_t b) { return phases[a] < phases[b]; });
    out.phases.resize(static_cast<std::size_t>(n));
    Matrix sorted(u.rows(), u.rows());
    for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
        out.phases[k] = phases[order[k]];
        sorted.eigen().col(static_cast<Eigen::Index>(k)) =
            basis.col(static_cast<Eigen::Index>(order[k]));
    }
    out.vectors = std::move(sorted);
    return out;
}

// Analytical index recomputed through the Cayley picture: the winding of
// unitary eigenphases through -1, tracked in the phase window that the
// trusted eigenvalue window maps to.  Independent of spectral_flow on the
// data side (phases of kappa versus eigenvalues of H); must agree exactly.
inline FlowResult cayley_flow_result(const DiscreteFamily& family, const FlowOptions& opt = {}) {
    if (!family.closed()) throw error("cayley flow is defined for closed loops");
    const double phase_window = 2.0 * std::atan(family.window());
    auto cache = std::make_shared<std::map<double, WindowData>>();
    WindowSampler sampler;
    sampler.weights = family.weights();
    sampler.window = phase_window;
    sampler.at = [&family, cache, phase_window](double s) {
        const double key = family.wrap(s);
        auto it = cache->find(key);
        if (it != cache->end()) return it->second;
        AssembledSample assembled = family.sample(key);
        Matrix kappa = cayley(assembled.compressed);
        const auto sys = unitary_eigenphases(kappa);
        WindowData data;
        std::vector<std::size_t> inside;
        for (std::size_t k = 0; k < sys.phases.size(); ++k) {
            const double v = sys.phases[k] - std::numbers::pi;
            data.min_abs_eigenvalue = std::min(data.min_abs_eigenvalue, std::abs(v));
            data.edge_distance =
                std::min(data.edge_distance, std::abs(std::abs(v) - phase_window));
            if (std::abs(v) <= phase_window) inside.push_back(k);
        }
        data.values.reserve(inside.size());
        Matrix lifted(assembled.basis.rows(), inside.size());
        for (std::size_t c = 0; c < inside.size(); ++c) {
            data.values.push_back(sys.phases[inside[c]] - std::numbers::pi);
            lifted.eigen().col(static_cast<Eigen::Index>(c)) =
                assembled.basis.eigen() *
                sys.vectors.eigen().col(static_cast<Eigen::Index>(inside[c]));
        }
        data.vectors = std::move(lifted);
        return cache->emplace(key, std::move(data)).first->second;
    };
    return windowed_flow(sampler, opt);
}

inline long cayley_flow(const DiscreteFamily& family, const FlowOptions& opt = {}) {
    return cayley_flow_result(family, opt).flow;
}

}  // namespace indexlab
