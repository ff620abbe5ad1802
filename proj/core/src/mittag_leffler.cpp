#include "fracctl/mittag_leffler.hpp"

#include "fracctl/errors.hpp"

#include <quadmath.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace fracctl {

namespace {

constexpr double kPi = std::numbers::pi;

// Largest |x|^{1/alpha} handled by each Taylor variant.
constexpr double kDoubleTaylorRho = 4.0;
constexpr double kQuadTaylorRho = 40.0;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// sin(pi x) with argument reduction, exact zeros at the integers.
double sin_pi(double x) {
    if (x == std::floor(x)) {
        return 0.0;
    }
    double r = x - 2.0 * std::round(0.5 * x); // r in [-1, 1]
    return std::sin(kPi * r);
}

// Gamma for x >= 0.5.
double lanczos_gamma(double x) {
    const double xm = x - 1.0;
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        acc += kLanczos[i] / (xm + static_cast<double>(i));
    }
    const double t = xm + 7.5;
    // t^(xm+0.5) e^-t split in two halves to delay overflow near x = 171.
    const double half = std::pow(t, 0.5 * (xm + 0.5));
    return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * acc;
}

struct SeriesResult {
    double value;
    double error_estimate;
    bool converged;
};

SeriesResult taylor_double(const MlParams& p, double x) {
    const double stop = 0.1 * p.series_tol;
    double sum = 0.0;
    double carry = 0.0;
    double power = 1.0;
    int small_run = 0;
    double last = 0.0;
    for (int k = 0; k < p.max_terms; ++k) {
        const double term = power * rgamma(p.alpha * k + p.beta);
        // Kahan compensated summation
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        last = std::abs(term);
        small_run = last < stop ? small_run + 1 : 0;
        if (small_run >= 2) {
            return {sum, last, true};
        }
        power *= x;
    }
    return {sum, last, false};
}

// 1/Gamma(alpha k + beta) in binary128, grown on demand. Solution-family
// tables evaluate thousands of arguments for a handful of (alpha, beta) pairs,
// so the coefficients are cached per thread.
class QuadCoefficientCache {
public:
    const std::vector<__float128>& get(double alpha, double beta, int count) {
        auto& coeffs = table_[Key{alpha, beta}];
        const __float128 a = alpha;
        const __float128 b = beta;
        for (auto k = static_cast<int>(coeffs.size()); k < count; ++k) {
            const __float128 g = tgammaq(a * k + b);
            coeffs.push_back(isinfq(g) ? __float128(0) : 1 / g);
        }
        return coeffs;
    }

private:
    struct Key {
        double alpha;
        double beta;
        bool operator<(const Key& o) const { return alpha < o.alpha || (alpha == o.alpha && beta < o.beta); }
    };
    std::map<Key, std::vector<__float128>> table_;
};

SeriesResult taylor_quad(const MlParams& p, double x) {
    thread_local QuadCoefficientCache cache;
    const std::vector<__float128>& rg = cache.get(p.alpha, p.beta, p.max_terms);

    const __float128 stop = 0.01 * p.series_tol;
    const __float128 xq = x;
    __float128 sum = 0;
    __float128 power = 1;
    __float128 last = 0;
    int small_run = 0;
    for (int k = 0; k < p.max_terms; ++k) {
        const __float128 term = power * rg[static_cast<std::size_t>(k)];
        sum += term;
        last = fabsq(term);
        small_run = last < stop ? small_run + 1 : 0;
        if (small_run >= 2) {
            return {static_cast<double>(sum), static_cast<double>(last), true};
        }
        power *= xq;
    }
    return {static_cast<double>(sum), static_cast<double>(last), false};
}

// E_{a,b}(-r) ~ (2/a) Re[w^{1-b} e^w] - sum_k (-r)^{-k} / Gamma(b - a k),
// w = r^{1/a} e^{i pi/a}; the exponential pair is present only for a > 1.
SeriesResult asymptotic(const MlParams& p, double x) {
    const double r = -x;
    const double rho = std::pow(r, 1.0 / p.alpha);
    double value = 0.0;
    if (p.alpha > 1.0) {
        const double phase = kPi / p.alpha;
        const double re_w = rho * std::cos(phase);
        const double im_w = rho * std::sin(phase);
        const double arg = (1.0 - p.beta) * phase + im_w;
        value += (2.0 / p.alpha) * std::pow(rho, 1.0 - p.beta) * std::exp(re_w) * std::cos(arg);
    }

    // Truncate where the envelope r^{-k} Gamma(ak + 1 - b) / pi stops shrinking.
    const double stop = 0.01 * p.series_tol;
    const double log_r = std::log(r);
    double prev_envelope = HUGE_VAL;
    double envelope = HUGE_VAL;
    double sign = -1.0; // (-1)^k at k = 1
    double algebraic = 0.0;
    for (int k = 1; k <= p.max_terms; ++k) {
        const double shifted = p.alpha * k + 1.0 - p.beta;
        envelope = shifted > 0.0 ? std::exp(std::lgamma(shifted) - k * log_r) / kPi : HUGE_VAL;
        if (shifted > 0.0 && envelope > prev_envelope) {
            envelope = prev_envelope;
            break;
        }
        algebraic += sign * std::exp(-k * log_r) * rgamma(p.beta - p.alpha * k);
        if (envelope < stop) {
            break;
        }
        prev_envelope = envelope;
        sign = -sign;
    }
    value -= algebraic;
    return {value, envelope, envelope <= 10.0 * p.series_tol};
}

} // namespace

void MlParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw ValidationError("alpha", "must lie in (0, 2]");
    }
    if (!(beta > 0.0)) {
        throw ValidationError("beta", "must be positive");
    }
    if (!(series_tol > 0.0)) {
        throw ValidationError("series_tol", "must be positive");
    }
    if (max_terms < 8) {
        throw ValidationError("max_terms", "must be at least 8");
    }
}

double gamma_fn(double x) {
    if (x < 0.5) {
        const double s = sin_pi(x);
        if (s == 0.0) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return kPi / (s * lanczos_gamma(1.0 - x));
    }
    return lanczos_gamma(x);
}

double rgamma(double x) {
    if (x < 0.5) {
        // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
        return sin_pi(x) * lanczos_gamma(1.0 - x) / kPi;
    }
    const double g = lanczos_gamma(x);
    return std::isinf(g) ? 0.0 : 1.0 / g;
}

double ml(const MlParams& params, double x) {
    params.validate();
    if (std::isnan(x) || x > 0.0) {
        throw DomainError("Mittag-Leffler evaluation is restricted to x <= 0, got " + std::to_string(x));
    }
    if (x == 0.0) {
        return rgamma(params.beta);
    }
    if (std::isinf(x)) {
        throw DomainError("Mittag-Leffler argument must be finite");
    }

    const double rho = std::pow(-x, 1.0 / params.alpha);
    if (rho > kQuadTaylorRho) {
        const SeriesResult asym = asymptotic(params, x);
        if (!asym.converged) {
            throw EvaluationFailure("asymptotic Mittag-Leffler series did not reach tolerance",
                                    asym.error_estimate);
        }
        return asym.value;
    }

    const SeriesResult series = rho <= kDoubleTaylorRho ? taylor_double(params, x) : taylor_quad(params, x);
    if (series.converged) {
        return series.value;
    }
    const SeriesResult asym = asymptotic(params, x);
    if (asym.converged) {
        return asym.value;
    }
    throw EvaluationFailure("Mittag-Leffler series did not converge within max_terms = " +
                                std::to_string(params.max_terms),
                            std::min(series.error_estimate, asym.error_estimate));
}

double ml(double alpha, double beta, double x) {
    MlParams params;
    params.alpha = alpha;
    params.beta = beta;
    return ml(params, x);
}

} // namespace fracctl
