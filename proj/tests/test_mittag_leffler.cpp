#include "fracctl/errors.hpp"
#include "fracctl/mittag_leffler.hpp"
#include "fracctl/mittag_leffler_reference.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using fracctl::ml;
using fracctl::ml_reference;

// Frozen from a 60-digit evaluation of the power series.
constexpr double kE15_15_m1 = 0.7065280370641757942561378;
constexpr double kE15_1_m5 = -0.300082050413130880802028;

TEST_CASE("ml: closed forms") {
    CHECK(ml(1.0, 1.0, -1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(std::abs(ml(2.0, 1.0, -2.46740110)) <= 1e-8);
    CHECK(ml(1.5, 1.5, 0.0) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(std::abs(ml(1.5, 1.5, -1.0) - kE15_15_m1) <= 1e-14);
}

TEST_CASE("ml: exponential, cosine and sinc limits") {
    for (double x = -10.0; x <= 0.0; x += 0.05) {
        CHECK(std::abs(ml(1.0, 1.0, x) - std::exp(x)) <= 1e-10);
    }
    for (double t = 0.0; t <= 20.0; t += 0.05) {
        CHECK(std::abs(ml(2.0, 1.0, -t * t) - std::cos(t)) <= 1e-8);
        CHECK(std::abs(t * ml(2.0, 2.0, -t * t) - std::sin(t)) <= 1e-8);
    }
}

TEST_CASE("ml: recurrence E(a,b,x) = 1/Gamma(b) + x E(a,a+b,x)") {
    for (double alpha : {1.2, 1.5, 1.9}) {
        for (double beta : {1.0, 2.0, alpha}) {
            for (double x = -30.0; x <= 0.0; x += 0.37) {
                const double lhs = ml(alpha, beta, x);
                const double rhs = 1.0 / std::tgamma(beta) + x * ml(alpha, alpha + beta, x);
                CHECK(std::abs(lhs - rhs) <= 1e-8);
            }
        }
    }
}

TEST_CASE("ml: bounded on the negative axis for 1 < q < 2") {
    for (double q : {1.1, 1.3, 1.5, 1.7, 1.9}) {
        for (double beta : {1.0, 2.0, q}) {
            const double envelope = ml(q, beta, 0.0) + 1.0;
            for (double x = -200.0; x <= 0.0; x += 0.9) {
                CHECK(std::abs(ml(q, beta, x)) <= envelope);
            }
        }
    }
}

TEST_CASE("ml: agrees with the multiprecision series on |x| <= 30") {
    for (double alpha : {0.6, 1.0, 1.3, 1.5, 1.8, 2.0}) {
        for (double beta : {0.5, 1.0, 1.5, 2.0}) {
            for (double x : {-0.1, -1.0, -3.0, -7.5, -15.0, -22.0, -30.0}) {
                const double ref = ml_reference(alpha, beta, x, 16);
                INFO("alpha=" << alpha << " beta=" << beta << " x=" << x);
                CHECK(std::abs(ml(alpha, beta, x) - ref) <= 1e-9);
            }
        }
    }
}

TEST_CASE("ml: far field uses the asymptotic branch") {
    // Beyond the Taylor regimes; q = 2 reduces to cos and sinc exactly.
    for (double t : {45.0, 60.0, 100.0, 1000.0}) {
        CHECK(std::abs(ml(2.0, 1.0, -t * t) - std::cos(t)) <= 1e-8);
        CHECK(std::abs(ml(2.0, 2.0, -t * t) - std::sin(t) / t) <= 1e-10);
    }
    CHECK(std::abs(ml(1.0, 1.0, -60.0)) <= 1e-15);
    // E_{1/2,1}(-x) = erfcx(x) ~ 1/(x sqrt(pi)) for large x.
    const double x = 50.0;
    const double x2 = x * x;
    const double asym = (1.0 - 1.0 / (2 * x2) + 3.0 / (4 * x2 * x2)) / (x * std::sqrt(std::numbers::pi));
    CHECK(ml(0.5, 1.0, -x) == doctest::Approx(asym).epsilon(1e-8));
}

TEST_CASE("ml: errors") {
    CHECK_THROWS_AS(ml(1.5, 1.0, 0.1), fracctl::DomainError);
    CHECK_THROWS_AS(ml(1.5, 1.0, std::nan("")), fracctl::DomainError);
    CHECK_THROWS_AS(ml(1.5, 1.0, -INFINITY), fracctl::DomainError);
    CHECK_THROWS_AS(ml(2.5, 1.0, -1.0), fracctl::ValidationError);
    CHECK_THROWS_AS(ml(1.5, 0.0, -1.0), fracctl::ValidationError);

    fracctl::MlParams p;
    p.alpha = 1.5;
    p.beta = 1.0;
    p.max_terms = 4;
    try {
        ml(p, -1.0);
        FAIL("expected ValidationError");
    } catch (const fracctl::ValidationError& e) {
        CHECK(e.field() == "max_terms");
    }

    p.max_terms = 8;
    try {
        ml(p, -20.0);
        FAIL("expected EvaluationFailure");
    } catch (const fracctl::EvaluationFailure& e) {
        CHECK(e.error_estimate() > p.series_tol);
    }
}

TEST_CASE("gamma and reciprocal gamma") {
    for (double x : {0.1, 0.5, 1.0, 1.5, 2.5, 7.3, 20.0, -0.5, -2.5}) {
        CHECK(fracctl::gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    }
    for (int n : {0, -1, -2, -7}) {
        CHECK(fracctl::rgamma(n) == 0.0);
    }
}

TEST_CASE("ml_reference: closed forms and precision cross-check") {
    CHECK(ml_reference(1.0, 1.0, -2.0, 15) == doctest::Approx(0.135335283236613).epsilon(1e-14));
    CHECK(std::abs(ml_reference(2.0, 2.0, -9.8696044, 12)) <= 1e-10);
    const double lo = ml_reference(1.5, 1.0, -5.0, 12);
    const double hi = ml_reference(1.5, 1.0, -5.0, 20);
    CHECK(std::abs(lo - hi) <= 1e-12);
    CHECK(std::abs(hi - kE15_1_m5) <= 1e-15);
}

TEST_CASE("ml_reference: errors") {
    CHECK_THROWS_AS(ml_reference(1.5, 1.0, -51.0, 12), fracctl::OracleOutOfRange);
    CHECK_THROWS_AS(ml_reference(1.5, 1.0, -1.0, 31), fracctl::DomainError);
    CHECK_THROWS_AS(ml_reference(1.5, 1.0, -1.0, 0), fracctl::DomainError);
}
