#include "fracctl/solution_families.hpp"

#include "fracctl/errors.hpp"
#include "fracctl/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace fracctl {

namespace {

void require_time(double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw DomainError("time must be finite and non-negative, got " + std::to_string(theta));
    }
}

void require_modes(const FamilyConfig& cfg, const SpectralVector& v) {
    if (v.size() != cfg.basis.modes) {
        throw ShapeError("vector has " + std::to_string(v.size()) + " modes, basis has " +
                         std::to_string(cfg.basis.modes));
    }
}

template <typename Kernel>
SpectralVector apply_diagonal(const FamilyConfig& cfg, double theta, const SpectralVector& v, Kernel kernel) {
    require_time(theta);
    require_modes(cfg, v);
    SpectralVector out = v;
    for (int n = 1; n <= cfg.basis.modes; ++n) {
        out.coeffs(n - 1) *= kernel(cfg.q, eigenvalue(cfg.basis, n), theta);
    }
    return out;
}

} // namespace

FamilyConfig FamilyConfig::measured(double q, const BasisConfig& basis, double theta_max) {
    FamilyConfig cfg;
    cfg.q = q;
    cfg.basis = basis;
    cfg.validate();
    cfg.M = measure_cosine_bound(cfg, theta_max);
    return cfg;
}

void FamilyConfig::validate() const {
    if (!(q > 1.0 && q <= 2.0)) {
        throw ValidationError("q", "fractional order must lie in (1, 2]");
    }
    basis.validate();
    if (!(M >= 1.0)) {
        throw ValidationError("M", "uniform bound must be at least 1");
    }
}

double cosine_kernel(double q, double mu, double t) {
    if (t == 0.0) {
        return 1.0;
    }
    return ml(q, 1.0, -mu * std::pow(t, q));
}

double sine_kernel(double q, double mu, double t) {
    if (t == 0.0) {
        return 0.0;
    }
    return t * ml(q, 2.0, -mu * std::pow(t, q));
}

double rl_kernel(double q, double mu, double t) {
    if (t == 0.0) {
        return 0.0;
    }
    return std::pow(t, q - 1.0) * ml(q, q, -mu * std::pow(t, q));
}

SpectralVector cq_apply(const FamilyConfig& cfg, double theta, const SpectralVector& v) {
    if (theta == 0.0) {
        require_modes(cfg, v);
        return v;
    }
    return apply_diagonal(cfg, theta, v, cosine_kernel);
}

SpectralVector sq_apply(const FamilyConfig& cfg, double theta, const SpectralVector& v) {
    return apply_diagonal(cfg, theta, v, sine_kernel);
}

SpectralVector pq_apply(const FamilyConfig& cfg, double theta, const SpectralVector& v) {
    return apply_diagonal(cfg, theta, v, rl_kernel);
}

double measure_cosine_bound(const FamilyConfig& cfg, double theta_max, int grid_points) {
    if (!(theta_max > 0.0)) {
        throw DomainError("theta_max must be positive");
    }
    double bound = 1.0;
    for (int n = 1; n <= cfg.basis.modes; ++n) {
        const double mu = eigenvalue(cfg.basis, n);
        for (int i = 1; i <= grid_points; ++i) {
            const double theta = theta_max * i / grid_points;
            bound = std::max(bound, std::abs(cosine_kernel(cfg.q, mu, theta)));
        }
    }
    return bound;
}

FamilyTables tabulate(const FamilyConfig& cfg, double horizon, int intervals) {
    cfg.validate();
    if (!(horizon > 0.0) || intervals < 1) {
        throw ValidationError("n_t", "tabulation needs a positive horizon and at least one interval");
    }
    const int modes = cfg.basis.modes;
    FamilyTables tables;
    tables.step = horizon / intervals;
    tables.cosine.resize(intervals + 1, modes);
    tables.sine.resize(intervals + 1, modes);
    tables.rl.resize(intervals + 1, modes);
    for (int n = 1; n <= modes; ++n) {
        const double mu = eigenvalue(cfg.basis, n);
        for (int k = 0; k <= intervals; ++k) {
            const double t = k * tables.step;
            tables.cosine(k, n - 1) = cosine_kernel(cfg.q, mu, t);
            tables.sine(k, n - 1) = sine_kernel(cfg.q, mu, t);
            tables.rl(k, n - 1) = rl_kernel(cfg.q, mu, t);
        }
    }
    return tables;
}

Eigen::VectorXd trapezoid_weights(int intervals, double step) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(intervals + 1, step);
    w(0) *= 0.5;
    w(intervals) *= 0.5;
    return w;
}

Trajectory duhamel_linear(const FamilyConfig& cfg, const SpectralVector& z0, const SpectralVector& z1,
                          std::span<const SpectralVector> forcing, std::span<const double> grid) {
    cfg.validate();
    require_modes(cfg, z0);
    require_modes(cfg, z1);
    if (grid.size() < 2 || forcing.size() != grid.size()) {
        throw ShapeError("forcing must be sampled on every grid node");
    }
    const auto intervals = static_cast<int>(grid.size()) - 1;
    const double h = grid.back() / intervals;
    for (int k = 0; k <= intervals; ++k) {
        if (std::abs(grid[static_cast<std::size_t>(k)] - k * h) > 1e-12 * std::max(1.0, grid.back())) {
            throw ShapeError("grid must be uniform and start at 0");
        }
        require_modes(cfg, forcing[static_cast<std::size_t>(k)]);
    }

    Trajectory out(grid.back(), intervals, cfg.basis.modes);
    for (int n = 1; n <= cfg.basis.modes; ++n) {
        const double mu = eigenvalue(cfg.basis, n);
        // The kernel depends on theta_k - theta_j = (k - j) h only.
        std::vector<double> kernel(static_cast<std::size_t>(intervals) + 1);
        for (int d = 0; d <= intervals; ++d) {
            kernel[static_cast<std::size_t>(d)] = rl_kernel(cfg.q, mu, d * h);
        }
        for (int k = 0; k <= intervals; ++k) {
            const double t = k * h;
            double conv = 0.0;
            for (int j = 0; j <= k; ++j) {
                const double w = (j == 0 || j == k) ? 0.5 * h : h;
                conv += w * kernel[static_cast<std::size_t>(k - j)] *
                        forcing[static_cast<std::size_t>(j)].coeffs(n - 1);
            }
            out.coeffs()(k, n - 1) =
                cosine_kernel(cfg.q, mu, t) * z0.coeffs(n - 1) + sine_kernel(cfg.q, mu, t) * z1.coeffs(n - 1) + conv;
        }
    }
    return out;
}

} // namespace fracctl
