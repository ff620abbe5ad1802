#pragma once

#include "fracctl/control_operators.hpp"
#include "fracctl/nonlocal_problem.hpp"
#include "fracctl/solution_families.hpp"
#include "fracctl/spectral_basis.hpp"
#include "fracctl/trajectory.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fracctl {

struct SolverConfig {
    int intervals = 200;  ///< n_t; nodes theta_k = k a / n_t
    double fp_tol = 1e-8; ///< sup-norm Picard update tolerance
    int max_iter = 100;

    void validate() const;
};

/// Sampled control, row k = u(theta_k).
using ControlTrajectory = Eigen::MatrixXd;

struct SolveReport {
    Trajectory trajectory;
    ControlTrajectory control;
    int iterations = 0;
    double final_update = 0.0;
    std::vector<double> update_history;
    double residual = 0.0; ///< ||z - G z||_C of the returned trajectory
    bool converged = false;

    double terminal_error = 0.0; ///< ||z(a) - z_d||
    double control_energy = 0.0; ///< trapezoid of ||u(theta)||^2 over [0, a]

    /// Bound on the feedback control: max_k ||u(theta_k)|| <= (L4 + L5 ||z||_C) / beta.
    /// Not applicable when the problem carries an open-loop control.
    bool lemma2_applicable = false;
    bool lemma2_ok = true;
    double lemma2_lhs = 0.0;
    double lemma2_rhs = 0.0;
};

/// Picard solver for the mild-solution fixed point z = G z on a uniform grid.
///
/// G z (theta_k) = C_q(theta_k)[z0 - phi(z)] + S_q(theta_k)[z1 - psi(z)]
///               + sum_j w_j P_q(theta_k - theta_j)[f_j + B u(theta_j)]
///
/// with trapezoid weights w_j on [0, theta_k] and f_j the pseudo-spectral
/// value of f(theta_j, z(theta_j), memory(theta_j)). Kernel values at every
/// offset (k - j) h are tabulated once per solver.
///
/// The feedback control is
///   u(theta_k) = B^* P_q(a - theta_k) R(beta, K) p(z),
///   p(z) = z_d - C_q(a)(z0 - phi(z)) - S_q(a)(z1 - psi(z)) - sum_j w_j P_q(a - theta_j) f_j.
/// With K from grammian() on the same grid, G z (a) = z_d - beta R(beta, K) p(z)
/// holds exactly at the discrete level.
class MildSolver {
public:
    MildSolver(ProblemSpec problem, int intervals);

    const ProblemSpec& problem() const { return problem_; }
    const FamilyTables& tables() const { return tables_; }
    int intervals() const { return tables_.intervals(); }

    /// Grammian on this solver's time grid.
    GrammianMatrix grammian() const;

    /// Memory term int_0^{theta_k} g(theta_k, tau, z(tau)) dtau per node, on
    /// collocation samples; zero at node 0.
    std::vector<Samples> volterra_accumulate(const Trajectory& traj) const;
    /// f_k as spectral coefficients, row k.
    Eigen::MatrixXd source_terms(const Trajectory& traj) const;

    ControlTrajectory feedback_control(const GrammianMatrix& K, double beta, const Trajectory& traj,
                                       const SpectralVector& z_d) const;
    /// G z; uses the open-loop control when the problem has one.
    Trajectory apply_G(const GrammianMatrix& K, double beta, const Trajectory& traj, const SpectralVector& z_d) const;
    double residual(const GrammianMatrix& K, double beta, const Trajectory& traj, const SpectralVector& z_d) const;

    /// Picard iteration from the constant trajectory z0. Non-convergence is
    /// reported, not thrown; DivergenceError if an iterate turns non-finite.
    SolveReport solve(const GrammianMatrix& K, double beta, const SpectralVector& z_d, const SolverConfig& cfg) const;

private:
    struct Sweep {
        Trajectory next;
        ControlTrajectory control;
        SpectralVector phi;
        SpectralVector psi;
    };

    Sweep sweep(const GrammianMatrix& K, double beta, const Trajectory& traj, const SpectralVector& z_d) const;
    ControlTrajectory feedback_from_sources(const GrammianMatrix& K, double beta, const Eigen::MatrixXd& sources,
                                            const SpectralVector& phi, const SpectralVector& psi,
                                            const SpectralVector& z_d) const;
    /// sum_j w_j P_q((k - j) h) x_j for every mode.
    Eigen::RowVectorXd convolve(const Eigen::MatrixXd& x, int k) const;
    void check_grid(const Trajectory& traj) const;

    ProblemSpec problem_;
    FamilyTables tables_;
    CollocationTransform transform_;
};

std::vector<Samples> volterra_accumulate(const ProblemSpec& problem, const Trajectory& traj);
ControlTrajectory feedback_control(const ProblemSpec& problem, const GrammianMatrix& K, double beta,
                                   const Trajectory& traj, const SpectralVector& z_d);
Trajectory apply_G(const ProblemSpec& problem, const GrammianMatrix& K, double beta, const Trajectory& traj,
                   const SpectralVector& z_d);
double residual(const ProblemSpec& problem, const GrammianMatrix& K, double beta, const Trajectory& traj,
                const SpectralVector& z_d);
SolveReport solve_fixed_point(const ProblemSpec& problem, const GrammianMatrix& K, double beta,
                              const SpectralVector& z_d, const SolverConfig& cfg);

} // namespace fracctl
