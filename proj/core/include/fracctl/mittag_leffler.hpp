#pragma once

namespace fracctl {

/// Parameters of the two-parameter Mittag-Leffler function E_{alpha,beta}.
struct MlParams {
    double alpha = 1.0;       ///< order, 0 < alpha <= 2
    double beta = 1.0;        ///< second parameter, beta > 0
    double series_tol = 1e-15; ///< absolute tolerance for series truncation
    int max_terms = 1000;     ///< cap on series terms, >= 8

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// Gamma function via a Lanczos approximation (g = 7, 9 coefficients) with
/// the reflection formula for arguments below 1/2. Relative error stays
/// under 1e-13 away from the poles.
double gamma_fn(double x);

/// 1/Gamma(x); entire, so exactly 0 at the non-positive integers.
double rgamma(double x);

/// E_{alpha,beta}(x) for x <= 0.
///
/// Three regimes keyed on rho = |x|^{1/alpha}, which sets the size of the
/// largest Taylor term (about e^rho):
///   - rho <= 4: Taylor series in double with Kahan summation;
///   - rho <= 40: Taylor series in binary128 (1/Gamma coefficients cached
///     per thread), so cancellation of up to e^40 still leaves ~1e-16
///     absolute accuracy;
///   - rho > 40: algebraic asymptotic series, plus the pair of oscillatory
///     exponential terms for 1 < alpha <= 2.
///
/// Throws DomainError for x > 0, EvaluationFailure if the Taylor series does
/// not converge within max_terms and the asymptotic series cannot reach the
/// tolerance either.
double ml(const MlParams& params, double x);

/// Shorthand with default tolerances.
double ml(double alpha, double beta, double x);

} // namespace fracctl
