#pragma once

#include <stdexcept>
#include <string>

namespace indexlab {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_mismatch : error { using error::error; };
struct not_hermitian : error { using error::error; };
struct no_convergence : error { using error::error; };
struct singular_iterate : error { using error::error; };
struct rank_deficient : error { using error::error; };
struct not_invertible : error { using error::error; };
struct not_elliptic : error { using error::error; };
struct not_selfadjoint : error { using error::error; };
struct zero_eigenvalue : error { using error::error; };
struct rank_jump : error { using error::error; };
struct rank_too_large : error { using error::error; };
struct grid_too_coarse : error { using error::error; };
struct nyquist_violation : error { using error::error; };
struct not_lagrangian : error { using error::error; };
struct ambiguous_crossing : error { using error::error; };
struct step_too_coarse : error { using error::error; };
struct param_mismatch : error { using error::error; };
struct too_large : error { using error::error; };
struct index_out_of_range : error { using error::error; };
struct missing_data : error { using error::error; };
struct invalid_scenario : error { using error::error; };

}  // namespace indexlab
