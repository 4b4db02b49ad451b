#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "family.hpp"
#include "sbp.hpp"
#include "topological.hpp"

namespace indexlab {

// Tensor grid on the flat cylinder [0,1] x S^1: n_t axial intervals and an
// odd count of equispaced angular nodes.
struct CylinderGrid {
    std::size_t n_t = 16;
    std::size_t n_theta = 17;
    int sbp_order = 2;

    double h_t() const { return 1.0 / static_cast<double>(n_t); }
    double h_theta() const { return 2.0 * std::numbers::pi / static_cast<double>(n_theta); }
};

// Maps one resolution parameter to a grid: g axial intervals and the nearest
// odd angular node count at or above g.
inline CylinderGrid make_grid(std::size_t g) {
    CylinderGrid grid;
    grid.n_t = g;
    grid.n_theta = g % 2 == 1 ? g : g + 1;
    return grid;
}

// Discretization of the model operator on the full (uncompressed) grid
// space, with the blockwise stencil structure exposed for fast application.
// Vector layout: index = block * n1 + (j * n_theta + q) * m + c with block 0
// the plus chirality, j the axial node, q the angular node, c the channel.
class RawCylinderOperator {
  public:
    RawCylinderOperator(const CylinderGrid& grid, std::size_t m)
        : grid_(grid),
          m_(m),
          pair_(upwind_pair(grid.n_t)),
          s_theta_(circle_derivative(grid.n_theta)) {
        if (grid.sbp_order != 2) throw error("only the order 2 operator pair is built in");
        nt_ = grid.n_t + 1;
        ntheta_ = grid.n_theta;
        n1_ = nt_ * ntheta_ * m_;
        const double hth = grid.h_theta();
        node_weights_.resize(nt_ * ntheta_);
        for (std::size_t j = 0; j < nt_; ++j)
            for (std::size_t q = 0; q < ntheta_; ++q)
                node_weights_[j * ntheta_ + q] = pair_.h_weights[j] * hth;
    }

    std::size_t full_dim() const { return 2 * n1_; }
    std::size_t half_dim() const { return n1_; }
    std::size_t channels() const { return m_; }
    std::size_t axial_nodes() const { return nt_; }
    std::size_t angular_nodes() const { return ntheta_; }
    const CylinderGrid& grid() const { return grid_; }
    const SbpPair& pair() const { return pair_; }
    const Matrix& theta_derivative() const { return s_theta_; }
    double node_weight(std::size_t node) const { return node_weights_[node]; }
    double row_weight(std::size_t r) const { return node_weights_[(r % n1_) / m_]; }

    std::size_t row_index(int block, std::size_t j, std::size_t q, std::size_t c) const {
        return static_cast<std::size_t>(block) * n1_ + (j * ntheta_ + q) * m_ + c;
    }

    // y = A u for the odd operator A = [[0, U], [L, 0]] with
    // L = -i D+ (x) I + I (x) S and U = -i D- (x) I - I (x) S per channel.
    EVec apply(const EVec& u) const {
        if (static_cast<std::size_t>(u.size()) != full_dim())
            throw dimension_mismatch("operator input length");
        EVec y = EVec::Zero(u.size());
        const auto& dp = pair_.d_plus.eigen();
        const auto& dm = pair_.d_minus.eigen();
        const auto& st = s_theta_.eigen();
        const cplx mi(0, -1);
        for (int block = 0; block < 2; ++block) {
            const int dst_block = 1 - block;
            const cplx theta_sign = block == 0 ? cplx(1) : cplx(-1);
            const auto& dt = block == 0 ? dp : dm;
            for (std::size_t j = 0; j < nt_; ++j) {
                for (std::size_t q = 0; q < ntheta_; ++q) {
                    for (std::size_t c = 0; c < m_; ++c) {
                        const cplx v = u(static_cast<Eigen::Index>(row_index(block, j, q, c)));
                        if (v == cplx(0)) continue;
                        for (std::size_t jp = 0; jp < nt_; ++jp) {
                            const cplx a = mi * dt(static_cast<Eigen::Index>(jp),
                                                   static_cast<Eigen::Index>(j));
                            if (a == cplx(0)) continue;
                            y(static_cast<Eigen::Index>(row_index(dst_block, jp, q, c))) += a * v;
                        }
                        for (std::size_t qp = 0; qp < ntheta_; ++qp) {
                            const cplx a = theta_sign * st(static_cast<Eigen::Index>(qp),
                                                           static_cast<Eigen::Index>(q));
                            if (a == cplx(0)) continue;
                            y(static_cast<Eigen::Index>(row_index(dst_block, j, qp, c))) += a * v;
                        }
                    }
                }
            }
        }
        return y;
    }

    // <Au, v>_H - <u, Av>_H - boundary term, where the boundary term sums
    // h_theta <i sigma(n) u, v> over the two boundary circles.  Exact zero
    // up to rounding for the built-in convention; sigma_sign = -1 computes
    // the deliberately flipped boundary term as a negative control.
    cplx green_defect(const EVec& u, const EVec& v, int sigma_sign = 1) const {
        if (u.size() != v.size() || static_cast<std::size_t>(u.size()) != full_dim())
            throw dimension_mismatch("green defect input length");
        const EVec au = apply(u);
        const EVec av = apply(v);
        cplx lhs(0);
        for (std::size_t r = 0; r < full_dim(); ++r) {
            const auto ri = static_cast<Eigen::Index>(r);
            const double w = row_weight(r);
            lhs += std::conj(v(ri)) * w * au(ri) - std::conj(av(ri)) * w * u(ri);
        }
        cplx bnd(0);
        const double hth = grid_.h_theta();
        const cplx i1(0, 1);
        for (int comp = 0; comp < 2; ++comp) {
            const std::size_t j = comp == 0 ? 0 : nt_ - 1;
            const double comp_sign = comp == 0 ? 1.0 : -1.0;
            for (std::size_t q = 0; q < ntheta_; ++q) {
                for (std::size_t c = 0; c < m_; ++c) {
                    const auto r0 = static_cast<Eigen::Index>(row_index(0, j, q, c));
                    const auto r1 = static_cast<Eigen::Index>(row_index(1, j, q, c));
                    const cplx factor = i1 * comp_sign * static_cast<double>(sigma_sign) * hth;
                    bnd += std::conj(v(r0)) * factor * u(r1);
                    bnd += std::conj(v(r1)) * factor * u(r0);
                }
            }
        }
        return lhs - bnd;
    }

  private:
    CylinderGrid grid_;
    std::size_t m_;
    SbpPair pair_;
    Matrix s_theta_;
    std::size_t nt_ = 0, ntheta_ = 0, n1_ = 0;
    std::vector<double> node_weights_;
};

namespace detail {

// Builds the compressed matrix M = P* H (A P) and the basis P at one loop
// parameter.  P has H-normalized unit columns at interior axial nodes and
// boundary-condition frame columns at the two end circles, so M entries are
// short weighted sums of stencil coefficients; no large dense intermediates
// are formed.
inline AssembledSample assemble_sample(const RawCylinderOperator& op, const LoopFamilySpec& spec,
                                       double s, double hermiticity_tol) {
    const std::size_t m = op.channels();
    const std::size_t nt = op.axial_nodes();
    const std::size_t nth = op.angular_nodes();
    const std::size_t n_axial = nt - 1;  // intervals
    const std::size_t n_interior_cols = (nt - 2) * nth * 2 * m;
    const std::size_t dim = n_interior_cols + 2 * nth * m;

    // boundary frames per component and angular node
    std::vector<std::vector<Matrix>> frames(2);
    for (int comp = 0; comp < 2; ++comp) {
        frames[comp].reserve(nth);
        for (std::size_t q = 0; q < nth; ++q) {
            const double theta =
                2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(nth);
            frames[comp].push_back(lagrangian_frame(spec.at(comp, theta, s), comp));
        }
    }

    auto interior_col = [&](std::size_t j, std::size_t q, std::size_t c, int block) {
        return ((j - 1) * nth + q) * 2 * m + c * 2 + static_cast<std::size_t>(block);
    };
    auto boundary_col = [&](int comp, std::size_t q, std::size_t c) {
        return n_interior_cols + static_cast<std::size_t>(comp) * nth * m + q * m + c;
    };

    const auto& dp = op.pair().d_plus.eigen();
    const auto& dmx = op.pair().d_minus.eigen();
    const auto& st = op.theta_derivative().eigen();

    Matrix mout(dim, dim);
    auto me = mout.eigen();
    me.setZero();

    // scatter of one operator output entry into the compressed row space
    auto scatter = [&](std::size_t dst_block, std::size_t jp, std::size_t qp, std::size_t c,
                       cplx amount, std::size_t col_b) {
        const std::size_t node = jp * nth + qp;
        const double w = op.node_weight(node);
        if (jp >= 1 && jp <= n_axial - 1) {
            const std::size_t a = interior_col(jp, qp, c, static_cast<int>(dst_block));
            me(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(col_b)) +=
                std::sqrt(w) * amount;
            return;
        }
        const int comp = jp == 0 ? 0 : 1;
        const Matrix& f = frames[comp][qp];
        const double sw = std::sqrt(w);
        for (std::size_t cp = 0; cp < m; ++cp) {
            const cplx overlap =
                std::conj(f.eigen()(static_cast<Eigen::Index>(dst_block * m + c),
                                    static_cast<Eigen::Index>(cp)));
            me(static_cast<Eigen::Index>(boundary_col(comp, qp, cp)),
               static_cast<Eigen::Index>(col_b)) += overlap * sw * amount;
        }
    };

    // operator action on one source entry of a P column
    auto emit = [&](int block, std::size_t j, std::size_t q, std::size_t c, cplx value,
                    std::size_t col_b) {
        const auto dst_block = static_cast<std::size_t>(1 - block);
        const cplx mi(0, -1);
        const cplx theta_sign = block == 0 ? cplx(1) : cplx(-1);
        for (std::size_t jp = 0; jp < nt; ++jp) {
            const cplx a = block == 0 ? dp(static_cast<Eigen::Index>(jp),
                                           static_cast<Eigen::Index>(j))
                                      : dmx(static_cast<Eigen::Index>(jp),
                                            static_cast<Eigen::Index>(j));
            if (a == cplx(0)) continue;
            scatter(dst_block, jp, q, c, mi * a * value, col_b);
        }
        for (std::size_t qp = 0; qp < nth; ++qp) {
            const cplx a = st(static_cast<Eigen::Index>(qp), static_cast<Eigen::Index>(q));
            if (a == cplx(0)) continue;
            scatter(dst_block, j, qp, c, theta_sign * a * value, col_b);
        }
    };

    for (std::size_t j = 1; j <= n_axial - 1; ++j) {
        for (std::size_t q = 0; q < nth; ++q) {
            const double v = 1.0 / std::sqrt(op.node_weight(j * nth + q));
            for (std::size_t c = 0; c < m; ++c)
                for (int block = 0; block < 2; ++block)
                    emit(block, j, q, c, cplx(v), interior_col(j, q, c, block));
        }
    }
    for (int comp = 0; comp < 2; ++comp) {
        const std::size_t j = comp == 0 ? 0 : n_axial;
        for (std::size_t q = 0; q < nth; ++q) {
            const double v = 1.0 / std::sqrt(op.node_weight(j * nth + q));
            const Matrix& f = frames[comp][q];
            for (std::size_t c = 0; c < m; ++c) {
                const std::size_t col = boundary_col(comp, q, c);
                for (std::size_t cc = 0; cc < m; ++cc) {
                    const cplx top = f.eigen()(static_cast<Eigen::Index>(cc),
                                               static_cast<Eigen::Index>(c));
                    const cplx bot = f.eigen()(static_cast<Eigen::Index>(m + cc),
                                               static_cast<Eigen::Index>(c));
                    if (top != cplx(0)) emit(0, j, q, cc, top * v, col);
                    if (bot != cplx(0)) emit(1, j, q, cc, bot * v, col);
                }
            }
        }
    }

    const double scale = std::max(mout.frobenius_norm(), 1.0);
    if (mout.hermitian_defect() > hermiticity_tol * scale)
        throw not_lagrangian("compressed operator is not Hermitian; boundary data is not "
                             "Lagrangian");
    me = 0.5 * (EMat(me) + EMat(me.adjoint()));

    // lift basis P, needed for eigenvector overlaps in the flow tracker
    Matrix basis(op.full_dim(), dim);
    auto pe = basis.eigen();
    pe.setZero();
    for (std::size_t j = 1; j <= n_axial - 1; ++j) {
        for (std::size_t q = 0; q < nth; ++q) {
            const double v = 1.0 / std::sqrt(op.node_weight(j * nth + q));
            for (std::size_t c = 0; c < m; ++c)
                for (int block = 0; block < 2; ++block)
                    pe(static_cast<Eigen::Index>(op.row_index(block, j, q, c)),
                       static_cast<Eigen::Index>(interior_col(j, q, c, block))) = v;
        }
    }
    for (int comp = 0; comp < 2; ++comp) {
        const std::size_t j = comp == 0 ? 0 : n_axial;
        for (std::size_t q = 0; q < nth; ++q) {
            const double v = 1.0 / std::sqrt(op.node_weight(j * nth + q));
            const Matrix& f = frames[comp][q];
            for (std::size_t c = 0; c < m; ++c) {
                const std::size_t col = boundary_col(comp, q, c);
                for (std::size_t cc = 0; cc < m; ++cc) {
                    pe(static_cast<Eigen::Index>(op.row_index(0, j, q, cc)),
                       static_cast<Eigen::Index>(col)) =
                        f.eigen()(static_cast<Eigen::Index>(cc), static_cast<Eigen::Index>(c)) * v;
                    pe(static_cast<Eigen::Index>(op.row_index(1, j, q, cc)),
                       static_cast<Eigen::Index>(col)) =
                        f.eigen()(static_cast<Eigen::Index>(m + cc),
                                  static_cast<Eigen::Index>(c)) *
                        v;
                }
            }
        }
    }

    AssembledSample out;
    out.compressed = std::move(mout);
    out.basis = std::move(basis);
    out.weights.resize(op.full_dim());
    for (std::size_t r = 0; r < op.full_dim(); ++r) out.weights[r] = op.row_weight(r);
    return out;
}

}  // namespace detail

// Compresses the model operator with the loop's boundary conditions onto a
// lazily sampled Hermitian family.
inline DiscreteFamily assemble(const LoopFamilySpec& spec, const CylinderGrid& grid,
                               double window = 1.0, double hermiticity_tol = 1e-8) {
    if (grid.n_theta < 2 * static_cast<std::size_t>(std::max(spec.max_theta_frequency, 0)) + 1)
        throw nyquist_violation("angular grid cannot resolve the boundary data");
    auto op = std::make_shared<RawCylinderOperator>(grid, spec.m);
    const std::size_t dim = 2 * spec.m * grid.n_theta * grid.n_t;
    auto assembler = [op, spec, hermiticity_tol](double s) {
        return detail::assemble_sample(*op, spec, s, hermiticity_tol);
    };
    std::string description = spec.name + " @" + std::to_string(grid.n_t) + "x" +
                              std::to_string(grid.n_theta);
    return DiscreteFamily(std::move(assembler), dim, window, true, std::move(description));
}

// Smallest |eigenvalue| over sampled loop parameters; the invertibility
// probe for definite boundary data.
inline double gap_probe(const DiscreteFamily& family, std::size_t n_samples = 8) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(n_samples);
        for (double lam : family.spectrum(s)) gap = std::min(gap, std::abs(lam));
    }
    return gap;
}

}  // namespace indexlab
