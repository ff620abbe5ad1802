#include "fracctl/spectral_basis.hpp"

#include "fracctl/errors.hpp"

#include <cmath>
#include <string>

namespace fracctl {

BasisConfig BasisConfig::with_modes(int modes, double length) {
    BasisConfig cfg;
    cfg.length = length;
    cfg.modes = modes;
    cfg.collocation = 2 * modes + 1;
    return cfg;
}

void BasisConfig::validate() const {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("L", "must be positive and finite");
    }
    if (modes < 1) {
        throw ValidationError("N", "must be at least 1");
    }
    if (collocation < 2 * modes + 1) {
        throw ValidationError("Ny", "must be at least 2N + 1 = " + std::to_string(2 * modes + 1));
    }
}

SpectralVector SpectralVector::unit(int modes, int mode) {
    if (mode < 1 || mode > modes) {
        throw IndexError("mode " + std::to_string(mode) + " outside 1.." + std::to_string(modes));
    }
    SpectralVector v = zero(modes);
    v.coeffs(mode - 1) = 1.0;
    return v;
}

double eigenvalue(const BasisConfig& cfg, int n) {
    if (n < 1 || n > cfg.modes) {
        throw IndexError("mode " + std::to_string(n) + " outside 1.." + std::to_string(cfg.modes));
    }
    const double k = n * std::numbers::pi / cfg.length;
    return k * k;
}

double eigenfunction_at(const BasisConfig& cfg, int n, double y) {
    if (n < 1) {
        throw IndexError("mode index must be positive");
    }
    if (!(y >= 0.0 && y <= cfg.length)) {
        throw DomainError("position " + std::to_string(y) + " outside [0, L]");
    }
    return std::sqrt(2.0 / cfg.length) * std::sin(n * std::numbers::pi * y / cfg.length);
}

Eigen::VectorXd collocation_grid(const BasisConfig& cfg) {
    const double h = cfg.length / (cfg.collocation + 1);
    Eigen::VectorXd grid(cfg.collocation);
    for (int m = 0; m < cfg.collocation; ++m) {
        grid(m) = (m + 1) * h;
    }
    return grid;
}

CollocationTransform::CollocationTransform(const BasisConfig& cfg)
    : cfg_((cfg.validate(), cfg)), grid_(collocation_grid(cfg)), synthesis_(cfg.collocation, cfg.modes),
      weight_(cfg.length / (cfg.collocation + 1)) {
    for (int m = 0; m < cfg.collocation; ++m) {
        for (int n = 1; n <= cfg.modes; ++n) {
            synthesis_(m, n - 1) = eigenfunction_at(cfg, n, grid_(m));
        }
    }
}

Samples CollocationTransform::synthesize(const SpectralVector& v) const {
    if (v.size() != cfg_.modes) {
        throw ShapeError("expected " + std::to_string(cfg_.modes) + " coefficients, got " +
                         std::to_string(v.size()));
    }
    return synthesis_ * v.coeffs;
}

SpectralVector CollocationTransform::analyze(const Samples& samples) const {
    if (samples.size() != cfg_.collocation) {
        throw ShapeError("expected " + std::to_string(cfg_.collocation) + " samples, got " +
                         std::to_string(samples.size()));
    }
    return SpectralVector(weight_ * (synthesis_.transpose() * samples));
}

Samples synthesize(const BasisConfig& cfg, const SpectralVector& v, const Eigen::VectorXd& grid) {
    const CollocationTransform transform(cfg);
    if (grid.size() != transform.grid().size()) {
        throw ShapeError("grid length differs from the collocation grid");
    }
    if (!grid.isApprox(transform.grid(), 1e-12)) {
        throw ShapeError("grid is not the uniform interior collocation grid");
    }
    return transform.synthesize(v);
}

SpectralVector analyze(const BasisConfig& cfg, const Samples& samples) {
    return CollocationTransform(cfg).analyze(samples);
}

} // namespace fracctl
