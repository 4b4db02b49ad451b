#include "helpers.hpp"

#include <numbers>

#include "indexlab/chern.hpp"
#include "indexlab/topological.hpp"

using namespace indexlab;
using testutil::max_abs_diff;

namespace {

TorusSubbundleField winding_band_field(int k_theta, int k_s, double mass, std::size_t n_theta,
                                       std::size_t n_s) {
    TorusSubbundleField field;
    field.n_theta = n_theta;
    field.n_s = n_s;
    field.frames.resize(n_theta);
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(n_theta);
        for (std::size_t j = 0; j < n_s; ++j) {
            const double s = static_cast<double>(j) / static_cast<double>(n_s);
            field.frames[i].push_back(
                lower_band_frame(winding_automorphism(theta, s, k_theta, k_s, mass)));
        }
    }
    return field;
}

}  // namespace

TEST_CASE("constant field carries zero flux everywhere") {
    TorusSubbundleField field;
    field.n_theta = 6;
    field.n_s = 5;
    Matrix frame(3, 1);
    frame(1, 0) = cplx(1);
    field.frames.assign(6, std::vector<Matrix>(5, frame));
    auto summary = plaquette_fluxes(field);
    CHECK(summary.chern_raw == 0);
    CHECK(summary.residue < 1e-14);
    CHECK(summary.min_link == Catch::Approx(1.0));
    for (const auto& p : summary.fluxes) CHECK(p.flux == 0.0);
    CHECK(summary.fluxes.size() == 30);
}

TEST_CASE("winding band landmarks") {
    struct Landmark {
        double mass;
        long chern;
    };
    for (auto [mass, chern] : {Landmark{-1.0, -1}, Landmark{1.0, 1}, Landmark{3.0, 0}}) {
        auto field = winding_band_field(1, 1, mass, 24, 24);
        auto summary = plaquette_fluxes(field);
        CHECK(summary.chern_raw == chern);
        CHECK(summary.residue < 1e-10);
        CHECK(summary.min_link > 0.9);
    }
}

TEST_CASE("higher winding landmarks") {
    CHECK(plaquette_fluxes(winding_band_field(1, 2, 1.0, 32, 32)).chern_raw == 2);
    CHECK(plaquette_fluxes(winding_band_field(2, 1, 1.0, 32, 32)).chern_raw == 2);
    CHECK(plaquette_fluxes(winding_band_field(2, 2, 1.0, 32, 32)).chern_raw == 4);
}

TEST_CASE("lattice refinement does not move the integer") {
    for (std::size_t n : {12ul, 24ul, 48ul}) {
        CHECK(plaquette_fluxes(winding_band_field(1, 1, 1.0, n, n)).chern_raw == 1);
    }
}

TEST_CASE("flux data is gauge invariant") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
    auto field = winding_band_field(1, 1, 1.0, 16, 16);
    auto before = plaquette_fluxes(field);
    for (auto& row : field.frames)
        for (auto& f : row) f = Matrix::from_eigen(std::polar(1.0, ud(rng)) * f.eigen());
    auto after = plaquette_fluxes(field);
    CHECK(after.chern_raw == before.chern_raw);
    for (std::size_t k = 0; k < before.fluxes.size(); ++k)
        CHECK(after.fluxes[k].flux == Catch::Approx(before.fluxes[k].flux).margin(1e-12));
}

TEST_CASE("rank two fields add like direct sums and tolerate unitary gauge") {
    std::mt19937 rng(62);
    const std::size_t n = 24;
    TorusSubbundleField field;
    field.n_theta = n;
    field.n_s = n;
    field.frames.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = static_cast<double>(j) / n;
            Matrix t = block_diag(winding_automorphism(theta, s, 1, 1, 1.0),
                                  winding_automorphism(theta, s, 2, 1, 1.0));
            field.frames[i].push_back(lower_band_frame(t));
        }
    }
    REQUIRE(field.rank() == 2);
    CHECK(plaquette_fluxes(field).chern_raw == 3);

    for (auto& row : field.frames)
        for (auto& f : row)
            f = Matrix::from_eigen(f.eigen() * testutil::random_unitary(rng, 2).eigen());
    CHECK(plaquette_fluxes(field).chern_raw == 3);
}

TEST_CASE("orientation sign is applied by chern_number") {
    auto field = winding_band_field(1, 1, 1.0, 16, 16);
    field.orientation = 1;
    CHECK(chern_number(field) == 1);
    field.orientation = -1;
    CHECK(chern_number(field) == -1);
}

TEST_CASE("rank zero fields have vanishing chern number") {
    TorusSubbundleField field;
    field.n_theta = 4;
    field.n_s = 4;
    field.frames.assign(4, std::vector<Matrix>(4, Matrix(3, 0)));
    CHECK(plaquette_fluxes(field).chern_raw == 0);
    CHECK(chern_number(field) == 0);
}

TEST_CASE("orthogonal neighboring frames trip the link floor") {
    TorusSubbundleField field;
    field.n_theta = 4;
    field.n_s = 4;
    Matrix e0(2, 1), e1(2, 1);
    e0(0, 0) = cplx(1);
    e1(1, 0) = cplx(1);
    field.frames.resize(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            field.frames[i].push_back((i + j) % 2 == 0 ? e0 : e1);
    CHECK_THROWS_AS(plaquette_fluxes(field), grid_too_coarse);
}

TEST_CASE("validation rejects malformed fields") {
    auto field = winding_band_field(1, 1, 1.0, 8, 8);

    auto ragged = field;
    ragged.frames[3].pop_back();
    CHECK_THROWS_AS(ragged.validate(), dimension_mismatch);

    auto jumped = field;
    jumped.frames[2][5] = Matrix(2, 2);
    CHECK_THROWS_AS(jumped.validate(), rank_jump);

    auto crooked = field;
    crooked.frames[1][1] = Matrix::from_eigen(EMat(2.0 * crooked.frames[1][1].eigen()));
    CHECK_THROWS_AS(crooked.validate(), error);
}

TEST_CASE("lower_band_frame spans the negative eigenspace") {
    std::mt19937 rng(63);
    Matrix u = testutil::random_unitary(rng, 4);
    EMat d = EMat::Zero(4, 4);
    d(0, 0) = -2.0;
    d(1, 1) = -0.5;
    d(2, 2) = 1.0;
    d(3, 3) = 4.0;
    Matrix t = Matrix::from_eigen(u.eigen() * d * u.eigen().adjoint());
    Matrix f = lower_band_frame(t);
    REQUIRE(f.cols() == 2);
    CHECK(testutil::unitarity_defect(f) < 1e-12);
    Matrix target(4, 2);
    target.eigen().col(0) = u.eigen().col(0);
    target.eigen().col(1) = u.eigen().col(1);
    CHECK(max_abs_diff(frame_projector(f), frame_projector(target)) < 1e-12);

    Matrix touching{{cplx(0), cplx(0)}, {cplx(0), cplx(1)}};
    CHECK_THROWS_AS(lower_band_frame(touching), zero_eigenvalue);
}
