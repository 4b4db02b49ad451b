#include "helpers.hpp"

#include <numbers>

#include "indexlab/sbp.hpp"

using namespace indexlab;

TEST_CASE("pair identity H D+ + D-^T H = B holds to rounding") {
    for (std::size_t n : {7ul, 10ul, 16ul, 33ul}) {
        auto p = upwind_pair(n);
        CHECK(sbp_pair_defect(p) < 1e-13);
    }
}

TEST_CASE("difference weights match the frozen closure table") {
    const std::size_t n_int = 10;
    auto p = upwind_pair(n_int);
    const double h = p.h;
    REQUIRE(h == Catch::Approx(0.1));
    const std::size_t n = n_int + 1;
    auto hd = [&](std::size_t i, std::size_t j) { return (p.d_plus(i, j) * h).real(); };

    // top closure rows of h * D+
    const double top[3][5] = {{-3.0, 5.0, -2.0, 0.0, 0.0},
                              {-0.2, -1.0, 1.6, -0.4, 0.0},
                              {0.0, 0.0, -1.5, 2.0, -0.5}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(hd(i, j) == Catch::Approx(top[i][j]).margin(1e-14));

    // interior stencil
    for (std::size_t i = 3; i + 3 < n; ++i) {
        CHECK(hd(i, i) == Catch::Approx(-1.5));
        CHECK(hd(i, i + 1) == Catch::Approx(2.0));
        CHECK(hd(i, i + 2) == Catch::Approx(-0.5));
        CHECK(hd(i, i + 3) == Catch::Approx(0.0).margin(1e-15));
    }

    // bottom closure rows reproduce the mirrored quadrature
    CHECK(hd(n - 3, n - 3) == Catch::Approx(-1.5));
    CHECK(hd(n - 3, n - 2) == Catch::Approx(2.0));
    CHECK(hd(n - 3, n - 1) == Catch::Approx(-0.5));
    CHECK(hd(n - 2, n - 2) == Catch::Approx(-1.0));
    CHECK(hd(n - 2, n - 1) == Catch::Approx(1.0));
    CHECK(hd(n - 1, n - 2) == Catch::Approx(-1.0));
    CHECK(hd(n - 1, n - 1) == Catch::Approx(1.0));

    // quadrature weights
    const double w[3] = {0.25, 1.25, 1.0};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(p.h_weights[i] == Catch::Approx(w[i] * h));
        CHECK(p.h_weights[n - 1 - i] == Catch::Approx(w[i] * h));
    }
    for (std::size_t i = 3; i + 3 < n; ++i) CHECK(p.h_weights[i] == Catch::Approx(h));
}

TEST_CASE("minus operator is the grid reflection of the plus operator") {
    auto p = upwind_pair(12);
    const std::size_t n = 13;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            CHECK(std::abs(p.d_minus(i, j) + p.d_plus(n - 1 - i, n - 1 - j)) < 1e-14);
}

TEST_CASE("exactness on low-degree monomials") {
    const std::size_t n_int = 16;
    auto p = upwind_pair(n_int);
    const std::size_t n = n_int + 1;
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    Eigen::VectorXd x(static_cast<Eigen::Index>(n)), x2(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        x(static_cast<Eigen::Index>(i)) = static_cast<double>(i) * p.h;
        x2(static_cast<Eigen::Index>(i)) = x(static_cast<Eigen::Index>(i)) * x(static_cast<Eigen::Index>(i));
    }
    for (const Matrix* d : {&p.d_plus, &p.d_minus}) {
        Eigen::VectorXcd dc = d->eigen() * ones.cast<cplx>();
        Eigen::VectorXcd dx = d->eigen() * x.cast<cplx>();
        CHECK(dc.cwiseAbs().maxCoeff() < 1e-12);
        CHECK((dx - ones.cast<cplx>()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::VectorXcd dx2 = d->eigen() * x2.cast<cplx>();
        for (std::size_t i = 3; i + 3 < n; ++i)
            CHECK(std::abs(dx2(static_cast<Eigen::Index>(i)) - 2.0 * x(static_cast<Eigen::Index>(i))) <
                  1e-11);
    }
}

TEST_CASE("upwind part is dissipative") {
    for (std::size_t n : {8ul, 16ul, 32ul}) {
        CHECK(upwind_dissipation_bound(upwind_pair(n)) < 1e-12);
    }
}

TEST_CASE("too few intervals are refused") {
    CHECK_THROWS_AS(upwind_pair(6), grid_too_coarse);
    CHECK_NOTHROW(upwind_pair(7));
}

TEST_CASE("circle derivative is an antisymmetric circulant") {
    const std::size_t n = 9;
    Matrix d = circle_derivative(n);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(d(i, i)) < 1e-15);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(std::abs(d(i, j) + std::conj(d(j, i))) < 1e-14);
            CHECK(std::abs(d(i, j) - d((i + 1) % n, (j + 1) % n)) < 1e-13);
        }
    }
}

TEST_CASE("circle derivative differentiates resolvable waves exactly") {
    const std::size_t n = 11;
    Matrix d = circle_derivative(n);
    for (int k = 0; k <= 5; ++k) {
        Eigen::VectorXcd f(static_cast<Eigen::Index>(n)), expect(static_cast<Eigen::Index>(n));
        for (std::size_t q = 0; q < n; ++q) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(q) /
                                 static_cast<double>(n);
            f(static_cast<Eigen::Index>(q)) = std::exp(cplx(0, k * theta));
            expect(static_cast<Eigen::Index>(q)) = cplx(0, k) * f(static_cast<Eigen::Index>(q));
        }
        CHECK((d.eigen() * f - expect).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("even or tiny angular grids are refused") {
    CHECK_THROWS_AS(circle_derivative(8), nyquist_violation);
    CHECK_THROWS_AS(circle_derivative(1), nyquist_violation);
    CHECK_NOTHROW(circle_derivative(3));
}
