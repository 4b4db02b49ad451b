#include "helpers.hpp"

#include "indexlab/symbol.hpp"

using namespace indexlab;
using testutil::max_abs_diff;
using testutil::random_matrix;

namespace {

// Hermitian pair with invertible sigma_n built from a random congruence of
// the model pair, so ellipticity is inherited exactly.
BoundarySymbolSample congruent_model(std::mt19937& rng, std::size_t m) {
    BoundarySymbolSample model = dirac_sample(0, m);
    Matrix g = random_matrix(rng, 2 * m, 2 * m);
    // keep g well conditioned
    g = Matrix::from_eigen(g.eigen() + 4.0 * EMat::Identity(2 * m, 2 * m));
    return BoundarySymbolSample{
        Matrix::from_eigen(g.eigen().adjoint() * model.sigma_n.eigen() * g.eigen()),
        Matrix::from_eigen(g.eigen().adjoint() * model.sigma_tau.eigen() * g.eigen())};
}

}  // namespace

TEST_CASE("validate enforces Hermitian square pairs of even size") {
    CHECK_NOTHROW(dirac_sample(0).validate());
    CHECK_NOTHROW(dirac_sample(1, 3).validate());

    BoundarySymbolSample bad = dirac_sample(0);
    bad.sigma_tau = Matrix{{cplx(0), cplx(1)}, {cplx(2), cplx(0)}};
    CHECK_THROWS_AS(bad.validate(), not_hermitian);

    BoundarySymbolSample odd{Matrix::identity(3), Matrix::identity(3)};
    CHECK_THROWS_AS(odd.validate(), error);

    BoundarySymbolSample ragged{Matrix::identity(2), Matrix::identity(4)};
    CHECK_THROWS_AS(ragged.validate(), dimension_mismatch);
}

TEST_CASE("model boundary endomorphism is i s3 on both components") {
    for (int component : {0, 1}) {
        for (std::size_t m : {1ul, 2ul}) {
            Matrix b = boundary_endomorphism(dirac_sample(component, m));
            Matrix expected = kron(Matrix{{cplx(0, 1), cplx(0)}, {cplx(0), cplx(0, -1)}},
                                   Matrix::identity(m));
            CHECK(max_abs_diff(b, expected) < 1e-14);
        }
    }
}

TEST_CASE("split of the model sample lands on the chirality channels") {
    for (int component : {0, 1}) {
        auto s = split(dirac_sample(component, 2));
        REQUIRE(s.frame_plus.cols() == 2);
        REQUIRE(s.frame_minus.cols() == 2);
        CHECK(max_abs_diff(s.p_plus + s.p_minus, Matrix::identity(4)) < 1e-10);
        CHECK(max_abs_diff(s.p_plus * s.p_plus, s.p_plus) < 1e-9);

        // E+ spans the first two coordinates, E- the last two
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(std::abs(s.frame_plus(2, j)) < 1e-9);
            CHECK(std::abs(s.frame_plus(3, j)) < 1e-9);
            CHECK(std::abs(s.frame_minus(0, j)) < 1e-9);
            CHECK(std::abs(s.frame_minus(1, j)) < 1e-9);
        }
    }
}

TEST_CASE("split is similarity covariant") {
    std::mt19937 rng(41);
    auto sample = congruent_model(rng, 2);
    REQUIRE(elliptic_on_grid(sample));
    auto s = split(sample);
    Matrix b = boundary_endomorphism(sample);
    CHECK(max_abs_diff(s.p_plus * b, b * s.p_plus) < 1e-8 * b.frobenius_norm());
    CHECK(max_abs_diff(s.p_plus + s.p_minus, Matrix::identity(4)) < 1e-9);
    // ranges are b-invariant: b maps frame_plus into its own span
    Matrix pb = Matrix::from_eigen(frame_projector(s.frame_plus).eigen() *
                                   (b.eigen() * s.frame_plus.eigen()));
    CHECK(max_abs_diff(pb, Matrix::from_eigen(b.eigen() * s.frame_plus.eigen())) < 1e-8);
}

TEST_CASE("split rejects non-elliptic samples") {
    // sigma_tau = 0 puts the whole spectrum of b at zero
    BoundarySymbolSample degenerate{Matrix{{cplx(0), cplx(1)}, {cplx(1), cplx(0)}},
                                    Matrix(2, 2)};
    CHECK_THROWS_AS(split(degenerate), not_elliptic);

    // b = s1 has real spectrum {1, -1}
    BoundarySymbolSample real_spec{Matrix::identity(2),
                                   Matrix{{cplx(0), cplx(1)}, {cplx(1), cplx(0)}}};
    CHECK(!elliptic_on_grid(real_spec));
    CHECK_THROWS_AS(split(real_spec), not_elliptic);

    // singular sigma_n
    BoundarySymbolSample singular{Matrix(2, 2), Matrix::identity(2)};
    CHECK_THROWS_AS(split(singular), not_elliptic);
}

TEST_CASE("symplectic form values and antisymmetry") {
    Matrix s1{{cplx(0), cplx(1)}, {cplx(1), cplx(0)}};
    EVec e0(2), e1(2);
    e0 << cplx(1), cplx(0);
    e1 << cplx(0), cplx(1);

    // omega(u, v) = v^* (i sigma_n u)
    CHECK(std::abs(symplectic_form(s1, e0, e1) - cplx(0, 1)) < 1e-14);
    CHECK(std::abs(symplectic_form(s1, e1, e0) - cplx(0, 1)) < 1e-14);
    CHECK(std::abs(symplectic_form(s1, e0, e0)) < 1e-14);

    // sesquilinear antisymmetry: omega(v, u) = -conj(omega(u, v))
    std::mt19937 rng(42);
    Matrix h = testutil::random_hermitian(rng, 4);
    EVec u = random_matrix(rng, 4, 1).eigen().col(0);
    EVec v = random_matrix(rng, 4, 1).eigen().col(0);
    cplx uv = symplectic_form(h, u, v);
    cplx vu = symplectic_form(h, v, u);
    CHECK(std::abs(vu + std::conj(uv)) < 1e-12);
}

TEST_CASE("lagrangian test separates isotropic from non-isotropic lines") {
    Matrix s1{{cplx(0), cplx(1)}, {cplx(1), cplx(0)}};
    const double r = 1.0 / std::sqrt(2.0);

    Matrix isotropic(2, 1);
    isotropic(0, 0) = cplx(r);
    isotropic(1, 0) = cplx(0, r);
    CHECK(check_lagrangian(s1, isotropic));

    Matrix skew(2, 1);
    skew(0, 0) = cplx(r);
    skew(1, 0) = cplx(r);
    CHECK(!check_lagrangian(s1, skew));

    // wrong rank can never be Lagrangian
    CHECK(!check_lagrangian(s1, Matrix::identity(2)));
}

TEST_CASE("chirality channels are Lagrangian for the model sample") {
    for (int component : {0, 1}) {
        for (std::size_t m : {1ul, 2ul}) {
            auto sample = dirac_sample(component, m);
            auto s = split(sample);
            CHECK(check_lagrangian(sample.sigma_n, s.frame_plus));
            CHECK(check_lagrangian(sample.sigma_n, s.frame_minus));
        }
    }
}

TEST_CASE("grid ellipticity probe matches the spectral characterization") {
    CHECK(elliptic_on_grid(dirac_sample(0)));
    CHECK(elliptic_on_grid(dirac_sample(1, 2)));
    std::mt19937 rng(43);
    CHECK(elliptic_on_grid(congruent_model(rng, 1)));
}
