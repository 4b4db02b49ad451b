#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "indexlab/assembly.hpp"
#include "indexlab/cayley.hpp"

using namespace indexlab;

namespace {

DiscreteFamily scalar_family(std::function<double(double)> value, double window, bool closed,
                             std::string name) {
    auto fn = [value = std::move(value)](double s) { return Matrix{{cplx(value(s))}}; };
    return make_matrix_family(fn, 1, window, closed, std::move(name));
}

DiscreteFamily sawtooth_family(double offset, double sign, std::string name) {
    auto value = [offset, sign](double s) {
        double w = s - std::floor(s);
        return sign * (1.8 * w - offset);
    };
    return scalar_family(value, 1.0, true, std::move(name));
}

double phase_of(double lambda) { return std::numbers::pi + 2.0 * std::atan(lambda); }

}  // namespace

TEST_CASE("cayley transform of a hermitian matrix is unitary") {
    std::mt19937 rng(8101);
    for (std::size_t n : {1u, 5u, 30u}) {
        Matrix h = testutil::random_hermitian(rng, n);
        Matrix k = cayley(h);
        CHECK(testutil::unitarity_defect(k) <= 1e-13);
    }
    CHECK_THROWS_AS(cayley(Matrix(2, 3)), dimension_mismatch);
}

TEST_CASE("resolvent identity links the transform back to the resolvent") {
    std::mt19937 rng(8102);
    Matrix h = testutil::random_hermitian(rng, 12);
    Matrix k = cayley(h);
    const auto n = static_cast<Eigen::Index>(h.rows());
    EMat lhs = (h.eigen() + cplx(0, 1) * EMat::Identity(n, n)) *
               (EMat::Identity(n, n) - k.eigen());
    EMat rhs = cplx(0, 2) * EMat::Identity(n, n);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("eigenphases follow the eigenvalue map") {
    std::mt19937 rng(8103);
    Matrix h = testutil::random_hermitian(rng, 9);
    auto lambdas = hermitian_eigenvalues(h);
    auto sys = unitary_eigenphases(cayley(h));
    REQUIRE(sys.phases.size() == lambdas.size());
    CHECK(sys.residual <= 1e-12);
    // lambda -> pi + 2 atan(lambda) is increasing, so the sorted orders agree
    for (std::size_t k = 0; k < lambdas.size(); ++k)
        CHECK(sys.phases[k] == Catch::Approx(phase_of(lambdas[k])).margin(1e-12));
    CHECK(testutil::unitarity_defect(sys.vectors) <= 1e-12);
}

TEST_CASE("scalar landmarks of the eigenvalue map") {
    Matrix zero{{cplx(0)}};
    Matrix k0 = cayley(zero);
    CHECK(std::abs(k0.eigen()(0, 0) - cplx(-1)) <= 1e-15);
    auto sys0 = unitary_eigenphases(k0);
    CHECK(sys0.phases[0] == Catch::Approx(std::numbers::pi));

    Matrix one{{cplx(1)}};
    auto sys1 = unitary_eigenphases(cayley(one));
    CHECK(sys1.phases[0] == Catch::Approx(1.5 * std::numbers::pi));

    Matrix large{{cplx(1000.0)}};
    auto sysl = unitary_eigenphases(cayley(large));
    CHECK(sysl.phases[0] == Catch::Approx(phase_of(1000.0)));
    CHECK(sysl.phases[0] < 2.0 * std::numbers::pi);
}

TEST_CASE("degenerate cosine clusters are split by the sine block") {
    std::mt19937 rng(8104);
    Matrix v = testutil::random_unitary(rng, 2);
    const double alpha = 0.7;
    EMat d = EMat::Zero(2, 2);
    d(0, 0) = std::polar(1.0, alpha);
    d(1, 1) = std::polar(1.0, -alpha);
    Matrix u = Matrix::from_eigen(EMat(v.eigen() * d * v.eigen().adjoint()));
    auto sys = unitary_eigenphases(u);
    REQUIRE(sys.phases.size() == 2);
    CHECK(sys.residual <= 1e-12);
    CHECK(sys.phases[0] == Catch::Approx(alpha));
    CHECK(sys.phases[1] == Catch::Approx(2.0 * std::numbers::pi - alpha));
}

TEST_CASE("repeated hermitian eigenvalue gives a repeated phase") {
    std::mt19937 rng(8105);
    Matrix v = testutil::random_unitary(rng, 3);
    EMat d = EMat::Zero(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = 2.0;
    d(2, 2) = -1.0;
    Matrix h = Matrix::from_eigen(EMat(v.eigen() * d * v.eigen().adjoint()));
    auto sys = unitary_eigenphases(cayley(h));
    CHECK(sys.residual <= 1e-12);
    CHECK(sys.phases[0] == Catch::Approx(phase_of(-1.0)));
    CHECK(sys.phases[1] == Catch::Approx(phase_of(2.0)));
    CHECK(sys.phases[2] == Catch::Approx(phase_of(2.0)));
}

TEST_CASE("non-unitary input surfaces as a large residual") {
    Matrix crooked{{cplx(1), cplx(1)}, {cplx(0), cplx(1)}};
    auto sys = unitary_eigenphases(crooked);
    CHECK(sys.residual > 0.01);
}

TEST_CASE("cayley flow equals spectral flow on toy loops") {
    auto up = sawtooth_family(0.93, 1.0, "up");
    CHECK(cayley_flow(up) == 1);
    CHECK(cayley_flow(up) == spectral_flow(up));

    auto down = sawtooth_family(0.87, -1.0, "down");
    CHECK(cayley_flow(down) == -1);

    auto fn = [](double s) {
        const double a = 2.0 * std::numbers::pi * s;
        EMat h(2, 2);
        h << 0.8 * std::cos(a), 0.8 * std::sin(a), 0.8 * std::sin(a), -0.8 * std::cos(a);
        return Matrix::from_eigen(h);
    };
    auto rotating = make_matrix_family(fn, 2, 1.0, true, "rotating");
    CHECK(cayley_flow(rotating) == 0);

    CHECK(cayley_flow(direct_sum(up, up)) == 2);
    CHECK(cayley_flow(direct_sum(up, down)) == 0);
}

TEST_CASE("cayley flow requires a closed loop") {
    auto open = scalar_family([](double s) { return s - 0.49; }, 1.0, false, "open");
    CHECK_THROWS_AS(cayley_flow(open), error);
}

TEST_CASE("both analytical routes agree on the assembled loop") {
    auto fam = assemble(winding_spec(1, 1, 1.0), make_grid(8));
    const long through_eigenvalues = spectral_flow(fam);
    const long through_phases = cayley_flow(fam);
    CHECK(through_eigenvalues == -1);
    CHECK(through_phases == through_eigenvalues);
}
