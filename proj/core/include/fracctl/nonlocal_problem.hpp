#pragma once

#include "fracctl/control_operators.hpp"
#include "fracctl/errors.hpp"
#include "fracctl/solution_families.hpp"
#include "fracctl/spectral_basis.hpp"
#include "fracctl/trajectory.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace fracctl {

/// f(theta, z(theta), w(theta)) on collocation samples, where w carries the
/// already accumulated memory term int_0^theta g(theta, tau, z(tau)) dtau.
using SourceMap = std::function<Samples(double theta, const Samples& state, const Samples& memory)>;
/// g(theta, tau, z(tau)) on collocation samples.
using KernelMap = std::function<Samples(double theta, double tau, const Samples& state)>;
/// Open-loop control u(theta).
using ControlLaw = std::function<ControlVector(double theta)>;

/// phi(z) = sum_i a_i z(theta_i) and psi(z) = sum_i gamma_i z(theta_i).
struct NonlocalWeights {
    std::vector<double> times;
    std::vector<double> phi_weights;
    std::vector<double> psi_weights;

    int count() const { return static_cast<int>(times.size()); }
    double phi_sum() const;  ///< sum |a_i|, the Lipschitz constant of phi
    double psi_sum() const;  ///< sum |gamma_i|

    /// Equal lengths, finite weights, times in [0, horizon].
    void validate(double horizon) const;
};

/// Times are snapped to the nearest trajectory node; DomainError if a time
/// lies outside [0, a].
SpectralVector nonlocal_phi(const NonlocalWeights& w, const Trajectory& traj);
SpectralVector nonlocal_psi(const NonlocalWeights& w, const Trajectory& traj);

/// Constants the user declares for the nonlinearities. C1, C2: Lipschitz
/// constants of f in the state and memory arguments; C3: of g; d1, d2: of
/// phi, psi; m_bound: pointwise bound on |f(theta, 0, memory of 0)|.
struct DeclaredConstants {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double m_bound = 0.0;

    /// Values for the example nonlinearities on [0, horizon]:
    /// C1 = 1/3, C2 = 1, C3 = e^a / 2, d1, d2 from the weights,
    /// m_bound = 1/4 + (e^a - 1)/sqrt(2).
    static DeclaredConstants example(double horizon, const NonlocalWeights& w);

    void validate() const;
};

/// One controlled nonlocal problem. An empty f or g means the zero map.
struct ProblemSpec {
    FamilyConfig family;
    InputOperator B = InputOperator::example(6);
    SourceMap f;
    KernelMap g;
    NonlocalWeights nonlocal;
    SpectralVector z0 = SpectralVector::zero(6);
    SpectralVector z1 = SpectralVector::zero(6);
    double horizon = 1.0;
    DeclaredConstants constants;
    /// When set, the solver uses this control instead of the feedback law.
    ControlLaw open_loop;

    int modes() const { return family.basis.modes; }
    void validate() const;
};

/// e^tau / (sqrt(2) + |s|), pointwise.
Samples example_g(double theta, double tau, const Samples& state);
/// e^{-theta} |s| / ((3 + e^theta)(1 + |s|)) + memory, pointwise.
Samples example_f(double theta, const Samples& state, const Samples& memory);

/// Trapezoid approximation of int_0^{tau_k} g(tau_k, tau, s(tau)) dtau on the
/// uniform nodes tau_j = j h, j = 0..k, with k = history.size() - 1. Zero for
/// an empty g or k = 0.
Samples memory_term(const KernelMap& g, std::span<const Samples> history, double step);

/// Collocation samples at the uniform nodes tau_j = j h, j = 0..k.
using SampleHistory = std::vector<Samples>;

/// f(tau_k, s(tau_k), memory) with the memory term taken from `history`;
/// the source as the solver sees it at one node. Zero for an empty f.
Samples source_with_memory(const ProblemSpec& problem, const SampleHistory& history, double step);

/// The example problem: sine basis on (0, pi) with N modes and Ny = 2N + 1,
/// example f and g and B, z0 = z1 = 0, M measured on [0, horizon].
ProblemSpec example_problem(double q, int modes, const NonlocalWeights& w, double horizon = 1.0);

/// Distances used by the empirical checks.
inline double distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return (x - y).norm(); }
inline double distance(const SpectralVector& x, const SpectralVector& y) { return (x.coeffs - y.coeffs).norm(); }
inline double distance(const Trajectory& x, const Trajectory& y) { return sup_distance(x, y); }
/// max_j ||x_j - y_j||; ShapeError on different lengths.
double distance(const SampleHistory& x, const SampleHistory& y);

/// Largest ||F(x) - F(x')|| / ||x - x'|| over n_samples pairs drawn by
/// `sampler(rng)`. Pairs with x == x' are skipped. This is a lower bound on
/// the true constant, never a certificate.
template <typename Map, typename Sampler>
double estimate_lipschitz(Map&& map, Sampler&& sampler, int n_samples, std::mt19937_64& rng) {
    if (n_samples < 100) {
        throw DomainError("estimate_lipschitz needs at least 100 samples");
    }
    double best = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const auto [x, y] = sampler(rng);
        const double dx = distance(x, y);
        if (dx == 0.0) {
            continue;
        }
        best = std::max(best, distance(map(x), map(y)) / dx);
    }
    return best;
}

struct ContractionCheck {
    bool pass = false;
    double product = 0.0; ///< M (d1 + d2)
    double margin = 0.0;  ///< 1 - M (d1 + d2)
};

/// Passes iff M (d1 + d2) < 1. DomainError on negative arguments.
ContractionCheck check_contraction(double M, double d1, double d2);

/// Largest sampled max_m |F(x)_m| over n_samples inputs `sampler(rng)`.
template <typename Map, typename Sampler>
double check_uniform_bound(Map&& map, Sampler&& sampler, int n_samples, std::mt19937_64& rng) {
    if (n_samples < 100) {
        throw DomainError("check_uniform_bound needs at least 100 samples");
    }
    double m_hat = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const Samples out = map(sampler(rng));
        if (out.size() > 0) {
            m_hat = std::max(m_hat, out.cwiseAbs().maxCoeff());
        }
    }
    return m_hat;
}

struct UniformBoundReport {
    std::vector<double> amplitudes;
    std::vector<double> m_hat; ///< one per amplitude
    double declared = 0.0;
    bool within_declared = false; ///< every m_hat <= declared (up to rounding)
    bool growing = false;         ///< m_hat at the largest amplitude > 2x that at the smallest
    bool ok() const { return within_declared && !growing; }
};

/// Repeats check_uniform_bound at increasing input amplitudes. A bounded map
/// stays flat; a map like x -> x is flagged as growing.
template <typename Map, typename Sampler>
UniformBoundReport probe_uniform_bound(Map&& map, Sampler&& sampler_at, std::span<const double> amplitudes,
                                       int n_samples, double declared, std::mt19937_64& rng) {
    UniformBoundReport r;
    r.declared = declared;
    r.amplitudes.assign(amplitudes.begin(), amplitudes.end());
    for (const double amp : amplitudes) {
        r.m_hat.push_back(check_uniform_bound(map, [&](std::mt19937_64& g) { return sampler_at(amp, g); },
                                              n_samples, rng));
    }
    r.within_declared = std::all_of(r.m_hat.begin(), r.m_hat.end(),
                                    [&](double m) { return m <= declared * (1.0 + 1e-12); });
    r.growing = !r.m_hat.empty() && r.m_hat.back() > 2.0 * r.m_hat.front();
    return r;
}

} // namespace fracctl
