#include "fracctl/errors.hpp"
#include "fracctl/spectral_basis.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fracctl;

namespace {

SpectralVector random_vector(int n, std::mt19937_64& rng) {
    const auto v = oracle::uniform_vector(n, 1.0, rng);
    return SpectralVector(Eigen::Map<const Eigen::VectorXd>(v.data(), n));
}

} // namespace

TEST_CASE("eigenvalues") {
    CHECK(eigenvalue(BasisConfig::with_modes(6), 1) == doctest::Approx(1.0));
    CHECK(eigenvalue(BasisConfig::with_modes(6), 2) == doctest::Approx(4.0));
    CHECK(eigenvalue(BasisConfig::with_modes(6, 1.0), 3) == doctest::Approx(88.8264396).epsilon(1e-9));
    const auto cfg = BasisConfig::with_modes(12, 2.0);
    for (int n = 2; n <= 12; ++n) {
        CHECK(eigenvalue(cfg, n) > eigenvalue(cfg, n - 1));
    }
    CHECK_THROWS_AS(eigenvalue(cfg, 0), IndexError);
    CHECK_THROWS_AS(eigenvalue(cfg, 13), IndexError);
}

TEST_CASE("eigenfunctions") {
    const auto cfg = BasisConfig::with_modes(4);
    CHECK(eigenfunction_at(cfg, 1, std::numbers::pi / 2) == doctest::Approx(0.79788456).epsilon(1e-8));
    CHECK(std::abs(eigenfunction_at(cfg, 2, std::numbers::pi / 2)) <= 1e-15);
    CHECK(eigenfunction_at(cfg, 1, 0.0) == 0.0);
    CHECK_THROWS_AS(eigenfunction_at(cfg, 1, -0.1), DomainError);
    CHECK_THROWS_AS(eigenfunction_at(cfg, 1, 3.2), DomainError);
}

TEST_CASE("config validation names the field") {
    BasisConfig cfg = BasisConfig::with_modes(4);
    cfg.collocation = 8;
    try {
        cfg.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "Ny");
    }
    cfg = BasisConfig::with_modes(0);
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = BasisConfig::with_modes(3, -1.0);
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("synthesize / analyze round trip") {
    std::mt19937_64 rng(7);
    for (int N : {1, 3, 6, 16}) {
        for (double L : {1.0, std::numbers::pi, 5.0}) {
            BasisConfig cfg = BasisConfig::with_modes(N, L);
            const CollocationTransform t(cfg);

            const auto e1 = t.analyze(t.synthesize(SpectralVector::unit(N, 1)));
            CHECK((e1.coeffs - SpectralVector::unit(N, 1).coeffs).cwiseAbs().maxCoeff() <= 1e-10);

            const auto zero = t.synthesize(SpectralVector::zero(N));
            CHECK(zero.isZero(0.0));
            CHECK(t.analyze(zero).coeffs.isZero(0.0));

            for (int trial = 0; trial < 20; ++trial) {
                const SpectralVector v = random_vector(N, rng);
                CHECK((t.analyze(t.synthesize(v)).coeffs - v.coeffs).cwiseAbs().maxCoeff() <= 1e-10);
            }
            cfg.collocation = 3 * N + 4;
            const CollocationTransform wide(cfg);
            const SpectralVector v = random_vector(N, rng);
            CHECK((wide.analyze(wide.synthesize(v)).coeffs - v.coeffs).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("samples are the eigenfunction values") {
    const auto cfg = BasisConfig::with_modes(5);
    const auto grid = collocation_grid(cfg);
    const auto s = synthesize(cfg, SpectralVector::unit(5, 2), grid);
    for (int m = 0; m < grid.size(); ++m) {
        CHECK(s(m) == doctest::Approx(eigenfunction_at(cfg, 2, grid(m))).epsilon(1e-14));
        CHECK(grid(m) == doctest::Approx((m + 1) * std::numbers::pi / 12.0));
    }
}

TEST_CASE("discrete Parseval and orthonormality") {
    std::mt19937_64 rng(11);
    const auto cfg = BasisConfig::with_modes(8);
    const CollocationTransform t(cfg);
    const Eigen::MatrixXd gram = t.weight() * t.synthesis_matrix().transpose() * t.synthesis_matrix();
    CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-9);
    for (int trial = 0; trial < 50; ++trial) {
        const SpectralVector u = random_vector(8, rng), v = random_vector(8, rng);
        const double quad = t.weight() * t.synthesize(u).dot(t.synthesize(v));
        CHECK(std::abs(quad - u.dot(v)) <= 1e-9);
    }
}

TEST_CASE("shape errors") {
    const auto cfg = BasisConfig::with_modes(4);
    const CollocationTransform t(cfg);
    CHECK_THROWS_AS(t.synthesize(SpectralVector::zero(3)), ShapeError);
    CHECK_THROWS_AS(t.analyze(Samples::Zero(5)), ShapeError);
    CHECK_THROWS_AS(synthesize(cfg, SpectralVector::zero(4), Eigen::VectorXd::Zero(4)), ShapeError);
    CHECK_THROWS_AS(analyze(cfg, Samples::Zero(10)), ShapeError);
    CHECK_THROWS_AS(SpectralVector::unit(4, 5), IndexError);
}
