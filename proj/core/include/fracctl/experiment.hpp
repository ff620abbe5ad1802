#pragma once

#include "fracctl/mild_solver.hpp"
#include "fracctl/nonlocal_problem.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

namespace fracctl {

/// Everything a run needs, read from a flat `key = value` file.
///
/// Lists are comma separated; `#` starts a comment. Coefficient lists
/// (z0, z1, zd) may be shorter than N and are padded with zeros. Keys left
/// out keep the defaults below; Ny defaults to 2N + 1, d1 and d2 to the
/// weight sums, and C1, C2, C3, m_bound to the example values when f and g
/// are the example maps (0 otherwise).
///
/// The default target zd = 0.1 e_1 on [0, 1] is a scenario of this tool, not
/// part of the model.
struct ExperimentConfig {
    double q = 1.5;
    double a = 1.0;
    double L = std::numbers::pi;
    int N = 6;
    int Ny = 13;

    std::vector<double> z0;
    std::vector<double> z1;
    std::vector<double> zd{0.1};

    std::vector<double> nonlocal_times{0.5, 1.0};
    std::vector<double> phi_weights{0.1, 0.2};
    std::vector<double> psi_weights{0.2, 0.2};

    double C1 = 1.0 / 3.0;
    double C2 = 1.0;
    double C3 = std::exp(1.0) / 2.0;
    double d1 = 0.1 + 0.2; ///< same rounding as the weight sum
    double d2 = 0.2 + 0.2;
    double m_bound = 0.25 + std::expm1(1.0) / std::numbers::sqrt2;

    std::string f = "example"; ///< example | zero
    std::string g = "example"; ///< example | zero
    std::string B = "example"; ///< example | identity | upper_identity | zero

    int n_t = 200;
    double fp_tol = 1e-8;
    int max_iter = 100;

    std::vector<double> betas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    std::uint64_t seed = 12345;
    int samples = 2000; ///< random draws per empirical hypothesis check
    std::string output;

    /// Throws ValidationError naming the first offending key.
    void validate() const;

    SolverConfig solver() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates config text. ParseError carries the line number.
ExperimentConfig parse_config(const std::string& text);
/// Reads `path` and parses it; ParseError (line 0) if it cannot be read.
ExperimentConfig load_config(const std::string& path);
/// Every key, one per line, numbers with 17 significant digits, so that
/// parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& cfg);

ProblemSpec build_problem(const ExperimentConfig& cfg);
/// zd padded to N modes.
SpectralVector target_state(const ExperimentConfig& cfg);

struct SweepRecord {
    double beta = 0.0;
    double terminal_error = 0.0;
    double control_energy = 0.0;
    int iterations = 0;
    bool converged = false;
    bool lemma2_ok = false;
    double residual = 0.0;
};

/// One solve per beta against a Grammian shared by all of them, assembled
/// once on the solver grid. Up to `jobs` solves run concurrently; records
/// come back in input order. A solve that diverges is recorded as not
/// converged with infinite errors.
std::vector<SweepRecord> run_beta_sweep(const ExperimentConfig& cfg, int jobs = 1);

/// Header `beta,terminal_error,control_energy,iterations,converged,lemma2_ok`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

struct SimulationResult {
    SolveReport report;
    int modes = 0;
};

SimulationResult simulate(const ExperimentConfig& cfg, double beta);

/// Header `theta,coef_1..coef_N,unorm`, one row per grid node.
void write_trajectory_csv(std::ostream& out, const SolveReport& report);

struct HypothesisLine {
    std::string id;
    std::string description;
    bool testable = true;
    bool passed = false;
    std::string measured;
};

struct HypothesisReport {
    std::vector<HypothesisLine> lines;
    double M = 0.0;
    double contraction_margin = 0.0;

    bool all_passed() const;
};

/// Empirical checks of the standing assumptions for the configured problem.
/// Sampled constants are lower bounds; a check fails when one exceeds its
/// declared value by more than 5%.
HypothesisReport check_hypotheses(const ExperimentConfig& cfg);

void write_hypothesis_report(std::ostream& out, const HypothesisReport& report);

/// printf("%.17g").
std::string format_number(double x);

} // namespace fracctl
