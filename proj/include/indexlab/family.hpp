#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace indexlab {

// One assembled loop sample: the compressed Hermitian matrix, the basis that
// lifts compressed vectors back to the full grid space, and the full-space
// quadrature weights used for inner products.  Toy families use an identity
// basis and unit weights.
struct AssembledSample {
    Matrix compressed;
    Matrix basis;
    std::vector<double> weights;
};

// In-window eigendata at one loop parameter: eigenvalues ascending, the
// matching lifted eigenvectors as columns, and distances that the flow
// tracker uses for its degeneracy and window-edge guards.
struct WindowData {
    std::vector<double> values;
    Matrix vectors;
    double min_abs_eigenvalue = std::numeric_limits<double>::infinity();
    double edge_distance = std::numeric_limits<double>::infinity();
};

// A loop (or test path) of Hermitian matrices, assembled lazily per
// parameter value with cached eigendata.  Closed loops wrap the parameter
// modulo 1 so the s = 0 and s = 1 samples are the same object.
class DiscreteFamily {
  public:
    using Assembler = std::function<AssembledSample(double)>;

    DiscreteFamily(Assembler assembler, std::size_t dim, double window, bool closed,
                   std::string description)
        : assembler_(std::move(assembler)),
          dim_(dim),
          window_(window),
          closed_(closed),
          description_(std::move(description)) {
        if (!(window_ > 0)) throw error("trusted window must be positive");
    }

    std::size_t dim() const { return dim_; }
    double window() const { return window_; }
    bool closed() const { return closed_; }
    const std::string& description() const { return description_; }

    double wrap(double s) const {
        if (!closed_) return s;
        double w = s - std::floor(s);
        return w;
    }

    AssembledSample sample(double s) const { return assembler_(wrap(s)); }

    const std::vector<double>& spectrum(double s) const {
        const double key = wrap(s);
        auto it = spectra_.find(key);
        if (it != spectra_.end()) return it->second;
        auto assembled = assembler_(key);
        auto values = hermitian_eigenvalues(assembled.compressed);
        return spectra_.emplace(key, std::move(values)).first->second;
    }

    WindowData window_data(double s, double window) const {
        const double key = wrap(s);
        auto it = window_cache_.find({key, window});
        if (it != window_cache_.end()) return it->second;

        // a wider window cached at the same parameter already contains every
        // vector a narrower one needs, so slice instead of re-solving
        for (const auto& [ck, cached] : window_cache_) {
            if (ck.first != key || ck.second < window) continue;
            WindowData narrowed;
            narrowed.min_abs_eigenvalue = cached.min_abs_eigenvalue;
            for (double lam : spectra_.at(key))
                narrowed.edge_distance =
                    std::min(narrowed.edge_distance, std::abs(std::abs(lam) - window));
            std::vector<std::size_t> keep;
            for (std::size_t k = 0; k < cached.values.size(); ++k)
                if (std::abs(cached.values[k]) <= window) keep.push_back(k);
            narrowed.values.reserve(keep.size());
            Matrix sliced(cached.vectors.rows(), keep.size());
            for (std::size_t c = 0; c < keep.size(); ++c) {
                narrowed.values.push_back(cached.values[keep[c]]);
                sliced.eigen().col(static_cast<Eigen::Index>(c)) =
                    cached.vectors.eigen().col(static_cast<Eigen::Index>(keep[c]));
            }
            narrowed.vectors = std::move(sliced);
            window_cache_.emplace(std::make_pair(key, window), std::move(narrowed));
            return window_cache_.at({key, window});
        }

        auto assembled = assembler_(key);
        auto eig = hermitian_eig(assembled.compressed);
        ++eigensolves_;
        if (spectra_.find(key) == spectra_.end()) spectra_.emplace(key, eig.eigenvalues);

        WindowData data;
        std::vector<std::size_t> inside;
        for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
            const double lam = eig.eigenvalues[k];
            data.min_abs_eigenvalue = std::min(data.min_abs_eigenvalue, std::abs(lam));
            data.edge_distance = std::min(data.edge_distance, std::abs(std::abs(lam) - window));
            if (std::abs(lam) <= window) inside.push_back(k);
        }
        data.values.reserve(inside.size());
        const auto rows = static_cast<Eigen::Index>(assembled.basis.rows());
        Matrix lifted(static_cast<std::size_t>(rows), inside.size());
        for (std::size_t c = 0; c < inside.size(); ++c) {
            data.values.push_back(eig.eigenvalues[inside[c]]);
            lifted.eigen().col(static_cast<Eigen::Index>(c)) =
                assembled.basis.eigen() *
                eig.eigenvectors.eigen().col(static_cast<Eigen::Index>(inside[c]));
        }
        data.vectors = std::move(lifted);

        if (weights_.empty()) weights_ = assembled.weights;
        window_cache_.emplace(std::make_pair(key, window), data);
        return window_cache_.at({key, window});
    }

    // Full-space quadrature weights; populated on first sample access.
    const std::vector<double>& weights() const {
        if (weights_.empty()) {
            auto assembled = assembler_(0.0);
            weights_ = assembled.weights;
        }
        return weights_;
    }

    std::size_t eigensolve_count() const { return eigensolves_; }

    void clear_cache() const {
        spectra_.clear();
        window_cache_.clear();
    }

  private:
    Assembler assembler_;
    std::size_t dim_;
    double window_;
    bool closed_;
    std::string description_;
    mutable std::map<double, std::vector<double>> spectra_;
    mutable std::map<std::pair<double, double>, WindowData> window_cache_;
    mutable std::vector<double> weights_;
    mutable std::size_t eigensolves_ = 0;
};

// Wraps a plain matrix-valued function as a family with identity basis and
// unit weights; the workhorse for tracker unit tests and additivity toys.
inline DiscreteFamily make_matrix_family(std::function<Matrix(double)> fn, std::size_t dim,
                                         double window, bool closed, std::string description) {
    auto assembler = [fn = std::move(fn), dim](double s) {
        Matrix m = fn(s);
        if (m.rows() != dim || m.cols() != dim)
            throw dimension_mismatch("family sample has wrong size");
        AssembledSample out;
        out.compressed = std::move(m);
        out.basis = Matrix::identity(dim);
        out.weights.assign(dim, 1.0);
        return out;
    };
    return DiscreteFamily(std::move(assembler), dim, window, closed, std::move(description));
}

// Blockwise direct sum; the flow of the sum is the sum of the flows.
inline DiscreteFamily direct_sum(const DiscreteFamily& f, const DiscreteFamily& g) {
    if (f.closed() != g.closed())
        throw param_mismatch("direct summands must share the loop parameterization");
    if (f.window() != g.window())
        throw param_mismatch("direct summands must share the trusted window");
    const std::size_t dim = f.dim() + g.dim();
    auto assembler = [f, g](double s) {
        AssembledSample a = f.sample(s);
        AssembledSample b = g.sample(s);
        AssembledSample out;
        out.compressed = block_diag(a.compressed, b.compressed);
        out.basis = block_diag(a.basis, b.basis);
        out.weights = a.weights;
        out.weights.insert(out.weights.end(), b.weights.begin(), b.weights.end());
        return out;
    };
    return DiscreteFamily(std::move(assembler), dim, f.window(), f.closed(),
                          f.description() + " + " + g.description());
}

}  // namespace indexlab
