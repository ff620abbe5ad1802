#include "fracctl/mittag_leffler_reference.hpp"

#include "fracctl/errors.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>

namespace fracctl {

namespace mp = boost::multiprecision;

namespace {

// Scoped override of the MPFR default precision (decimal digits).
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits10) : saved_(mp::mpfr_float::default_precision()) {
        mp::mpfr_float::default_precision(digits10);
    }
    ~PrecisionScope() { mp::mpfr_float::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

} // namespace

double ml_reference(double alpha, double beta, double x, int digits) {
    if (std::abs(x) > 50.0) {
        throw OracleOutOfRange("series oracle is limited to |x| <= 50");
    }
    if (digits < 1 || digits > 30) {
        throw DomainError("digits must lie in [1, 30]");
    }
    if (!(alpha > 0.0 && alpha <= 2.0) || !(beta > 0.0)) {
        throw DomainError("alpha must lie in (0, 2] and beta must be positive");
    }

    // Largest term is about exp(|x|^{1/alpha}); that many decimals cancel.
    const double lost = std::pow(std::abs(x), 1.0 / alpha) / std::log(10.0) + 2.0;
    const auto working = static_cast<unsigned>(digits + lost + 20.0);
    const PrecisionScope scope(working);

    const mp::mpfr_float a(alpha);
    const mp::mpfr_float b(beta);
    const mp::mpfr_float z(x);
    const mp::mpfr_float stop = mp::pow(mp::mpfr_float(10), -(digits + 8));

    mp::mpfr_float sum = 0;
    mp::mpfr_float power = 1;
    int small_run = 0;
    for (int k = 0; small_run < 3; ++k) {
        const mp::mpfr_float term = power / mp::tgamma(a * k + b);
        sum += term;
        small_run = mp::abs(term) < stop ? small_run + 1 : 0;
        power *= z;
    }
    return sum.convert_to<double>();
}

} // namespace fracctl
