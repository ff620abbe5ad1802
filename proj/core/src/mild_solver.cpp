#include "fracctl/mild_solver.hpp"

#include "fracctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>

namespace fracctl {

void SolverConfig::validate() const {
    if (intervals < 16) {
        throw ValidationError("n_t", "need at least 16 time intervals, got " + std::to_string(intervals));
    }
    if (!(fp_tol > 0.0)) {
        throw ValidationError("fp_tol", "must be positive");
    }
    if (max_iter < 1) {
        throw ValidationError("max_iter", "must be at least 1");
    }
}

MildSolver::MildSolver(ProblemSpec problem, int intervals)
    : problem_((problem.validate(), std::move(problem))),
      tables_(tabulate(problem_.family, problem_.horizon, intervals)),
      transform_(problem_.family.basis) {}

GrammianMatrix MildSolver::grammian() const {
    return fracctl::grammian(tables_, problem_.B, problem_.horizon);
}

void MildSolver::check_grid(const Trajectory& traj) const {
    if (traj.intervals() != intervals() || traj.modes() != problem_.modes() ||
        std::abs(traj.horizon() - problem_.horizon) > 1e-14 * problem_.horizon) {
        throw ShapeError("trajectory is not on the solver grid (n_t = " + std::to_string(intervals()) + ", N = " +
                         std::to_string(problem_.modes()) + ")");
    }
}

Eigen::RowVectorXd MildSolver::convolve(const Eigen::MatrixXd& x, int k) const {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
    if (k == 0) {
        return acc;
    }
    const double h = tables_.step;
    for (int j = 0; j <= k; ++j) {
        const double w = (j == 0 || j == k) ? 0.5 * h : h;
        acc += w * tables_.rl.row(k - j).cwiseProduct(x.row(j));
    }
    return acc;
}

std::vector<Samples> MildSolver::volterra_accumulate(const Trajectory& traj) const {
    check_grid(traj);
    const int nodes = traj.nodes();
    const int ny = problem_.family.basis.collocation;
    std::vector<Samples> memory(static_cast<std::size_t>(nodes), Samples::Zero(ny));
    if (!problem_.g) {
        return memory;
    }
    std::vector<Samples> history;
    history.reserve(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        history.push_back(transform_.synthesize(traj.state(k)));
    }
    const std::span<const Samples> all(history);
    for (int k = 1; k < nodes; ++k) {
        memory[static_cast<std::size_t>(k)] =
            memory_term(problem_.g, all.first(static_cast<std::size_t>(k) + 1), tables_.step);
    }
    return memory;
}

Eigen::MatrixXd MildSolver::source_terms(const Trajectory& traj) const {
    check_grid(traj);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(traj.nodes(), problem_.modes());
    if (!problem_.f) {
        return out;
    }
    const std::vector<Samples> memory = volterra_accumulate(traj);
    for (int k = 0; k < traj.nodes(); ++k) {
        const Samples state = transform_.synthesize(traj.state(k));
        const Samples value = problem_.f(traj.time(k), state, memory[static_cast<std::size_t>(k)]);
        out.row(k) = transform_.analyze(value).coeffs.transpose();
    }
    return out;
}

ControlTrajectory MildSolver::feedback_from_sources(const GrammianMatrix& K, double beta,
                                                    const Eigen::MatrixXd& sources, const SpectralVector& phi,
                                                    const SpectralVector& psi, const SpectralVector& z_d) const {
    const int n = intervals();
    const int modes = problem_.modes();
    if (z_d.size() != modes) {
        throw ShapeError("target has " + std::to_string(z_d.size()) + " modes, problem has " + std::to_string(modes));
    }
    if (K.size() != modes) {
        throw ShapeError("Grammian is " + std::to_string(K.size()) + " x " + std::to_string(K.size()) +
                         ", problem has " + std::to_string(modes) + " modes");
    }
    const Eigen::VectorXd mismatch =
        z_d.coeffs - tables_.cosine.row(n).transpose().cwiseProduct(problem_.z0.coeffs - phi.coeffs) -
        tables_.sine.row(n).transpose().cwiseProduct(problem_.z1.coeffs - psi.coeffs) -
        convolve(sources, n).transpose();
    const Eigen::VectorXd r = Resolvent(beta, K).apply(SpectralVector(mismatch)).coeffs;

    const Eigen::MatrixXd& b = problem_.B.matrix();
    ControlTrajectory u(n + 1, problem_.B.control_dim());
    for (int k = 0; k <= n; ++k) {
        u.row(k) = (b.transpose() * tables_.rl.row(n - k).transpose().cwiseProduct(r)).transpose();
    }
    return u;
}

ControlTrajectory MildSolver::feedback_control(const GrammianMatrix& K, double beta, const Trajectory& traj,
                                               const SpectralVector& z_d) const {
    check_grid(traj);
    return feedback_from_sources(K, beta, source_terms(traj), nonlocal_phi(problem_.nonlocal, traj),
                                 nonlocal_psi(problem_.nonlocal, traj), z_d);
}

MildSolver::Sweep MildSolver::sweep(const GrammianMatrix& K, double beta, const Trajectory& traj,
                                    const SpectralVector& z_d) const {
    check_grid(traj);
    const int n = intervals();
    Sweep s;
    s.phi = nonlocal_phi(problem_.nonlocal, traj);
    s.psi = nonlocal_psi(problem_.nonlocal, traj);
    const Eigen::MatrixXd sources = source_terms(traj);

    if (problem_.open_loop) {
        s.control.resize(n + 1, problem_.B.control_dim());
        for (int k = 0; k <= n; ++k) {
            const ControlVector u = problem_.open_loop(traj.time(k));
            if (u.size() != problem_.B.control_dim()) {
                throw ShapeError("open-loop control has " + std::to_string(u.size()) + " entries, B expects " +
                                 std::to_string(problem_.B.control_dim()));
            }
            s.control.row(k) = u.coeffs.transpose();
        }
    } else {
        s.control = feedback_from_sources(K, beta, sources, s.phi, s.psi, z_d);
    }

    const Eigen::MatrixXd forcing = sources + s.control * problem_.B.matrix().transpose();
    const Eigen::RowVectorXd x0 = (problem_.z0.coeffs - s.phi.coeffs).transpose();
    const Eigen::RowVectorXd x1 = (problem_.z1.coeffs - s.psi.coeffs).transpose();
    s.next = Trajectory(problem_.horizon, n, problem_.modes());
    for (int k = 0; k <= n; ++k) {
        s.next.coeffs().row(k) =
            tables_.cosine.row(k).cwiseProduct(x0) + tables_.sine.row(k).cwiseProduct(x1) + convolve(forcing, k);
    }
    return s;
}

Trajectory MildSolver::apply_G(const GrammianMatrix& K, double beta, const Trajectory& traj,
                               const SpectralVector& z_d) const {
    return sweep(K, beta, traj, z_d).next;
}

double MildSolver::residual(const GrammianMatrix& K, double beta, const Trajectory& traj,
                            const SpectralVector& z_d) const {
    return sup_distance(traj, apply_G(K, beta, traj, z_d));
}

SolveReport MildSolver::solve(const GrammianMatrix& K, double beta, const SpectralVector& z_d,
                              const SolverConfig& cfg) const {
    cfg.validate();
    if (cfg.intervals != intervals()) {
        throw ValidationError("n_t", "solver was built for " + std::to_string(intervals()) + " intervals");
    }
    if (!(beta > 0.0)) {
        throw DomainError("beta must be positive");
    }

    SolveReport report;
    Trajectory z = Trajectory::constant(problem_.horizon, intervals(), problem_.z0);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        Trajectory next = sweep(K, beta, z, z_d).next;
        if (!next.coeffs().allFinite()) {
            throw DivergenceError("Picard iterate " + std::to_string(it) + " is not finite");
        }
        const double update = sup_distance(next, z);
        z = std::move(next);
        report.iterations = it;
        report.final_update = update;
        report.update_history.push_back(update);
        if (update <= cfg.fp_tol) {
            report.converged = true;
            break;
        }
    }

    const Sweep last = sweep(K, beta, z, z_d);
    report.residual = sup_distance(z, last.next);
    report.control = last.control;
    report.trajectory = std::move(z);
    const Trajectory& traj = report.trajectory;
    const int n = intervals();

    report.terminal_error = (traj.state(n).coeffs - z_d.coeffs).norm();
    const Eigen::VectorXd w = trapezoid_weights(n, tables_.step);
    report.control_energy = w.dot(report.control.rowwise().squaredNorm());

    if (!problem_.open_loop) {
        const auto& c = problem_.constants;
        const double q = problem_.family.q;
        const double M = problem_.family.M;
        const double a = problem_.horizon;
        const double g = std::tgamma(q);
        const double MB = problem_.B.norm();
        // ||S_q(a)|| <= M a, so the z1 term picks up max(1, a).
        const double ybar = problem_.z0.norm() + last.phi.norm() +
                            std::max(1.0, a) * (problem_.z1.norm() + last.psi.norm());
        const double m_norm = c.m_bound * std::sqrt(problem_.family.basis.length);
        const double L4 = MB * M * std::pow(a, q - 1.0) / g *
                          (z_d.norm() + M * ybar + M * std::pow(a, q) / g * m_norm);
        const double L5 = MB * M * M * std::pow(a, 2.0 * q - 1.0) / (g * g) * (c.C1 + a * c.C2 * c.C3);
        report.lemma2_applicable = true;
        report.lemma2_lhs = report.control.rows() > 0 ? report.control.rowwise().norm().maxCoeff() : 0.0;
        report.lemma2_rhs = (L4 + L5 * traj.sup_norm()) / beta;
        report.lemma2_ok = report.lemma2_lhs <= report.lemma2_rhs;
    }
    return report;
}

std::vector<Samples> volterra_accumulate(const ProblemSpec& problem, const Trajectory& traj) {
    return MildSolver(problem, traj.intervals()).volterra_accumulate(traj);
}

ControlTrajectory feedback_control(const ProblemSpec& problem, const GrammianMatrix& K, double beta,
                                   const Trajectory& traj, const SpectralVector& z_d) {
    return MildSolver(problem, traj.intervals()).feedback_control(K, beta, traj, z_d);
}

Trajectory apply_G(const ProblemSpec& problem, const GrammianMatrix& K, double beta, const Trajectory& traj,
                   const SpectralVector& z_d) {
    return MildSolver(problem, traj.intervals()).apply_G(K, beta, traj, z_d);
}

double residual(const ProblemSpec& problem, const GrammianMatrix& K, double beta, const Trajectory& traj,
                const SpectralVector& z_d) {
    return MildSolver(problem, traj.intervals()).residual(K, beta, traj, z_d);
}

SolveReport solve_fixed_point(const ProblemSpec& problem, const GrammianMatrix& K, double beta,
                              const SpectralVector& z_d, const SolverConfig& cfg) {
    return MildSolver(problem, cfg.intervals).solve(K, beta, z_d, cfg);
}

} // namespace fracctl
