#include "fracctl/nonlocal_problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace fracctl {

namespace {

double abs_sum(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0, [](double s, double x) { return s + std::abs(x); });
}

SpectralVector weighted_sum(const std::vector<double>& times, const std::vector<double>& weights,
                            const Trajectory& traj) {
    if (times.size() != weights.size()) {
        throw ShapeError("nonlocal times and weights differ in length");
    }
    SpectralVector out = SpectralVector::zero(traj.modes());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const int k = traj.nearest_node(times[i]);
        out.coeffs += weights[i] * traj.coeffs().row(k).transpose();
    }
    return out;
}

} // namespace

double NonlocalWeights::phi_sum() const { return abs_sum(phi_weights); }

double NonlocalWeights::psi_sum() const { return abs_sum(psi_weights); }

void NonlocalWeights::validate(double horizon) const {
    if (phi_weights.size() != times.size()) {
        throw ValidationError("phi_weights", "needs one weight per nonlocal time");
    }
    if (psi_weights.size() != times.size()) {
        throw ValidationError("psi_weights", "needs one weight per nonlocal time");
    }
    for (const double t : times) {
        if (!(t >= 0.0 && t <= horizon)) {
            throw ValidationError("nonlocal_times", "time " + std::to_string(t) + " outside [0, a]");
        }
    }
    for (const double w : phi_weights) {
        if (!std::isfinite(w)) {
            throw ValidationError("phi_weights", "weights must be finite");
        }
    }
    for (const double w : psi_weights) {
        if (!std::isfinite(w)) {
            throw ValidationError("psi_weights", "weights must be finite");
        }
    }
}

SpectralVector nonlocal_phi(const NonlocalWeights& w, const Trajectory& traj) {
    return weighted_sum(w.times, w.phi_weights, traj);
}

SpectralVector nonlocal_psi(const NonlocalWeights& w, const Trajectory& traj) {
    return weighted_sum(w.times, w.psi_weights, traj);
}

DeclaredConstants DeclaredConstants::example(double horizon, const NonlocalWeights& w) {
    DeclaredConstants c;
    c.C1 = 1.0 / 3.0;
    c.C2 = 1.0;
    c.C3 = std::exp(horizon) / 2.0;
    c.d1 = w.phi_sum();
    c.d2 = w.psi_sum();
    c.m_bound = 0.25 + std::expm1(horizon) / std::numbers::sqrt2;
    return c;
}

void DeclaredConstants::validate() const {
    const std::pair<const char*, double> fields[] = {{"C1", C1}, {"C2", C2}, {"C3", C3},
                                                     {"d1", d1}, {"d2", d2}, {"m_bound", m_bound}};
    for (const auto& [name, value] : fields) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw ValidationError(name, "declared constants must be finite and non-negative");
        }
    }
}

void ProblemSpec::validate() const {
    family.validate();
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("a", "horizon must be positive and finite");
    }
    if (B.state_dim() != modes()) {
        throw ValidationError("B", "input operator acts on " + std::to_string(B.state_dim()) + " modes, basis has " +
                                       std::to_string(modes()));
    }
    if (z0.size() != modes()) {
        throw ValidationError("z0", "expected " + std::to_string(modes()) + " coefficients");
    }
    if (z1.size() != modes()) {
        throw ValidationError("z1", "expected " + std::to_string(modes()) + " coefficients");
    }
    nonlocal.validate(horizon);
    constants.validate();
}

Samples example_g(double /*theta*/, double tau, const Samples& state) {
    return (std::exp(tau) / (std::numbers::sqrt2 + state.array().abs())).matrix();
}

Samples example_f(double theta, const Samples& state, const Samples& memory) {
    if (memory.size() != state.size()) {
        throw ShapeError("state and memory samples differ in length");
    }
    const auto s = state.array().abs();
    const double scale = std::exp(-theta) / (3.0 + std::exp(theta));
    return (scale * s / (1.0 + s)).matrix() + memory;
}

Samples memory_term(const KernelMap& g, std::span<const Samples> history, double step) {
    if (history.empty()) {
        throw ShapeError("memory term needs at least one node");
    }
    const auto k = history.size() - 1;
    Samples acc = Samples::Zero(history[0].size());
    if (!g || k == 0) {
        return acc;
    }
    const double theta = static_cast<double>(k) * step;
    for (std::size_t j = 0; j <= k; ++j) {
        const double w = (j == 0 || j == k) ? 0.5 * step : step;
        acc += w * g(theta, static_cast<double>(j) * step, history[j]);
    }
    return acc;
}

Samples source_with_memory(const ProblemSpec& problem, const SampleHistory& history, double step) {
    if (history.empty()) {
        throw ShapeError("history needs at least one node");
    }
    const Samples& now = history.back();
    if (!problem.f) {
        return Samples::Zero(now.size());
    }
    const double theta = static_cast<double>(history.size() - 1) * step;
    return problem.f(theta, now, memory_term(problem.g, history, step));
}

double distance(const SampleHistory& x, const SampleHistory& y) {
    if (x.size() != y.size()) {
        throw ShapeError("histories differ in length");
    }
    double d = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        d = std::max(d, (x[j] - y[j]).norm());
    }
    return d;
}

ProblemSpec example_problem(double q, int modes, const NonlocalWeights& w, double horizon) {
    ProblemSpec p;
    p.family = FamilyConfig::measured(q, BasisConfig::with_modes(modes), horizon);
    p.B = InputOperator::example(modes);
    p.f = example_f;
    p.g = example_g;
    p.nonlocal = w;
    p.z0 = SpectralVector::zero(modes);
    p.z1 = SpectralVector::zero(modes);
    p.horizon = horizon;
    p.constants = DeclaredConstants::example(horizon, w);
    p.validate();
    return p;
}

ContractionCheck check_contraction(double M, double d1, double d2) {
    if (!(M >= 0.0) || !(d1 >= 0.0) || !(d2 >= 0.0)) {
        throw DomainError("contraction check needs non-negative M, d1, d2");
    }
    ContractionCheck c;
    c.product = M * (d1 + d2);
    c.margin = 1.0 - c.product;
    c.pass = c.product < 1.0;
    return c;
}

} // namespace fracctl
