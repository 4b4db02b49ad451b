#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "boundary.hpp"
#include "chern.hpp"

namespace indexlab {

// Loop of boundary-value data over s in [0,1): per boundary component a
// self-adjoint invertible automorphism of E- in splitting coordinates,
// sampled anywhere in (theta, s).  The operator part is the built-in odd
// Dirac family on the flat cylinder; everything index-relevant lives in T.
struct LoopFamilySpec {
    std::size_t m = 1;
    std::function<Matrix(int component, double theta, double s)> automorphism;
    int max_theta_frequency = 1;
    std::size_t lattice_theta = 32;
    std::size_t lattice_s = 32;
    std::string name;

    Matrix at(int component, double theta, double s) const {
        Matrix t = automorphism(component, theta, s);
        if (t.rows() != m || t.cols() != m)
            throw dimension_mismatch("automorphism sample size differs from declared rank");
        return t;
    }
};

inline Matrix pauli(int k) {
    switch (k) {
        case 0: return Matrix{{cplx(0), cplx(1)}, {cplx(1), cplx(0)}};
        case 1: return Matrix{{cplx(0), cplx(0, -1)}, {cplx(0, 1), cplx(0)}};
        case 2: return Matrix{{cplx(1), cplx(0)}, {cplx(0), cplx(-1)}};
        default: throw index_out_of_range("pauli index");
    }
}

// T(theta, s) = d . sigma with d = (sin a, sin b, mass + cos a + cos b),
// a = k_theta * theta, b = 2 pi k_s * s.  Invertible whenever mass is not
// in {-2, 0, 2}.
inline Matrix winding_automorphism(double theta, double s, int k_theta, int k_s, double mass) {
    const double a = k_theta * theta;
    const double b = 2.0 * std::numbers::pi * k_s * s;
    const double d0 = std::sin(a), d1 = std::sin(b), d2 = mass + std::cos(a) + std::cos(b);
    return Matrix{{cplx(d2), cplx(d0, -d1)}, {cplx(d0, d1), cplx(-d2)}};
}

// Builds one subbundle field per boundary component: at each lattice node
// the frame of the negative eigenspace of T.  The orientation entry encodes
// the frozen sign table of the two boundary circles: the t = 0 circle
// carries +1, the t = 1 circle carries -1.  The pin was made once by
// matching the analytical side on the one-sided winding family and is
// exercised by the acceptance suite.
inline std::vector<TorusSubbundleField> build_f_field(const LoopFamilySpec& spec) {
    std::vector<TorusSubbundleField> fields;
    for (int comp = 0; comp < 2; ++comp) {
        TorusSubbundleField field;
        field.n_theta = spec.lattice_theta;
        field.n_s = spec.lattice_s;
        field.component_id = comp;
        field.orientation = comp == 0 ? 1 : -1;
        field.frames.resize(field.n_theta);
        std::size_t rank0 = 0;
        bool first = true;
        for (std::size_t i = 0; i < field.n_theta; ++i) {
            field.frames[i].reserve(field.n_s);
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(field.n_theta);
            for (std::size_t j = 0; j < field.n_s; ++j) {
                const double s = static_cast<double>(j) / static_cast<double>(field.n_s);
                Matrix t = spec.at(comp, theta, s);
                require_selfadjoint(t);
                Matrix frame = lower_band_frame(t);
                if (first) {
                    rank0 = frame.cols();
                    first = false;
                } else if (frame.cols() != rank0) {
                    throw rank_jump("subbundle rank changes at component " +
                                    std::to_string(comp) + " node (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
                }
                field.frames[i].push_back(std::move(frame));
            }
        }
        fields.push_back(std::move(field));
    }
    return fields;
}

// Sum of per-component Chern numbers with the component orientation signs.
inline long topological_index(const LoopFamilySpec& spec) {
    long total = 0;
    for (const auto& field : build_f_field(spec)) total += chern_number(field);
    return total;
}

// Frame-valued prescription of the subbundle over one boundary torus.
// Returns an m x r matrix with orthonormal columns; r may be zero.
using FrameFunction = std::function<Matrix(double theta, double s)>;

// Realizes a prescribed pair of subbundle fields by the reflection
// automorphism T = I - 2 F F*, which is self-adjoint, squares to the
// identity, and has the prescribed frame as its full negative eigenspace.
inline LoopFamilySpec realize_family(std::vector<FrameFunction> prescribed, std::size_t m,
                                     int max_theta_frequency, std::string name) {
    if (prescribed.size() != 2)
        throw dimension_mismatch("exactly two boundary components expected");
    auto shared = std::make_shared<std::vector<FrameFunction>>(std::move(prescribed));
    LoopFamilySpec spec;
    spec.m = m;
    spec.max_theta_frequency = max_theta_frequency;
    spec.name = std::move(name);
    spec.automorphism = [shared, m](int comp, double theta, double s) {
        if (comp != 0 && comp != 1) throw index_out_of_range("boundary component");
        const FrameFunction& f = (*shared)[static_cast<std::size_t>(comp)];
        const auto mi = static_cast<Eigen::Index>(m);
        if (!f) return Matrix::from_eigen(EMat::Identity(mi, mi));
        Matrix frame = f(theta, s);
        if (frame.cols() > m || (frame.cols() > 0 && frame.rows() != m))
            throw rank_too_large("prescribed frame exceeds the fiber rank");
        if (frame.cols() == 0) return Matrix::from_eigen(EMat::Identity(mi, mi));
        EMat t = EMat::Identity(mi, mi) -
                 2.0 * (frame.eigen() * frame.eigen().adjoint());
        return Matrix::from_eigen(t);
    };
    return spec;
}

// Builtin loop families used by scenarios and the acceptance suite.

inline LoopFamilySpec winding_spec(int k_theta = 1, int k_s = 1, double mass = 1.0) {
    LoopFamilySpec spec;
    spec.m = 2;
    spec.max_theta_frequency = std::abs(k_theta);
    spec.name = "winding";
    spec.automorphism = [k_theta, k_s, mass](int comp, double theta, double s) {
        if (comp == 0) return Matrix::identity(2);
        return winding_automorphism(theta, s, k_theta, k_s, mass);
    };
    return spec;
}

inline LoopFamilySpec constant_spec(double sign, std::string name, std::size_t m = 2) {
    LoopFamilySpec spec;
    spec.m = m;
    spec.max_theta_frequency = 0;
    spec.name = std::move(name);
    spec.automorphism = [sign, m](int, double, double) {
        return Matrix::from_eigen(EMat(sign * EMat::Identity(static_cast<Eigen::Index>(m),
                                                             static_cast<Eigen::Index>(m))));
    };
    return spec;
}

inline LoopFamilySpec dir_plus_spec(std::size_t m = 2) { return constant_spec(1.0, "dir-plus", m); }
inline LoopFamilySpec dir_minus_spec(std::size_t m = 2) {
    return constant_spec(-1.0, "dir-minus", m);
}

// s-independent but theta-dependent data; both indices must vanish on it.
inline LoopFamilySpec locally_constant_spec() {
    LoopFamilySpec spec;
    spec.m = 2;
    spec.max_theta_frequency = 1;
    spec.name = "locally-constant";
    spec.automorphism = [](int comp, double theta, double) {
        if (comp == 0) return Matrix::identity(2);
        const double d0 = std::sin(theta), d1 = 0.5, d2 = 1.0 + std::cos(theta);
        return Matrix{{cplx(d2), cplx(d0, -d1)}, {cplx(d0, d1), cplx(-d2)}};
    };
    return spec;
}

}  // namespace indexlab
