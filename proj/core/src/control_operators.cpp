#include "fracctl/control_operators.hpp"

#include "fracctl/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace fracctl {

InputOperator::InputOperator(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() < 1 || matrix_.cols() < 1) {
        throw ShapeError("input operator needs at least one row and one column");
    }
    if (!matrix_.allFinite()) {
        throw DomainError("input operator has non-finite entries");
    }
}

InputOperator InputOperator::example(int modes) {
    if (modes < 2) {
        throw DomainError("the example input operator needs N >= 2, got " + std::to_string(modes));
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(modes, modes - 1);
    m(0, 0) = 2.0;
    for (int i = 2; i <= modes; ++i) {
        m(i - 1, i - 2) = 1.0;
    }
    return InputOperator(std::move(m));
}

InputOperator InputOperator::identity(int modes) {
    if (modes < 1) {
        throw DomainError("need at least one mode");
    }
    return InputOperator(Eigen::MatrixXd::Identity(modes, modes));
}

InputOperator InputOperator::identity_on_upper_modes(int modes) {
    if (modes < 2) {
        throw DomainError("need N >= 2, got " + std::to_string(modes));
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(modes, modes - 1);
    for (int i = 2; i <= modes; ++i) {
        m(i - 1, i - 2) = 1.0;
    }
    return InputOperator(std::move(m));
}

InputOperator InputOperator::zero(int modes) {
    if (modes < 1) {
        throw DomainError("need at least one mode");
    }
    return InputOperator(Eigen::MatrixXd::Zero(modes, modes > 1 ? modes - 1 : 1));
}

SpectralVector InputOperator::apply(const ControlVector& u) const {
    if (u.size() != control_dim()) {
        throw ShapeError("control has " + std::to_string(u.size()) + " entries, operator expects " +
                         std::to_string(control_dim()));
    }
    return SpectralVector(matrix_ * u.coeffs);
}

ControlVector InputOperator::adjoint(const SpectralVector& v) const {
    if (v.size() != state_dim()) {
        throw ShapeError("state has " + std::to_string(v.size()) + " modes, operator expects " +
                         std::to_string(state_dim()));
    }
    return ControlVector(matrix_.transpose() * v.coeffs);
}

double InputOperator::norm() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram(), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

SpectralVector apply_B(const ControlVector& u) {
    return InputOperator::example(u.size() + 1).apply(u);
}

ControlVector apply_B_star(const SpectralVector& v) {
    return InputOperator::example(v.size()).adjoint(v);
}

double operator_norm_B(int modes) {
    return InputOperator::example(modes).norm();
}

double GrammianMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

GrammianMatrix grammian(const FamilyConfig& cfg, const InputOperator& B, double horizon, int n_quad) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("horizon must be positive and finite");
    }
    if (n_quad < 16) {
        throw DomainError("Grammian quadrature needs at least 16 intervals, got " + std::to_string(n_quad));
    }
    return grammian(tabulate(cfg, horizon, n_quad), B, horizon);
}

GrammianMatrix grammian(const FamilyTables& tables, const InputOperator& B, double horizon) {
    const int n = tables.intervals();
    const auto modes = static_cast<int>(tables.rl.cols());
    if (B.state_dim() != modes) {
        throw ShapeError("input operator acts on " + std::to_string(B.state_dim()) + " modes, tables have " +
                         std::to_string(modes));
    }
    const Eigen::MatrixXd bb = B.gram();
    const Eigen::VectorXd w = trapezoid_weights(n, tables.step);

    // Node nu_j = j h pairs with the offset a - nu_j = (n - j) h.
    GrammianMatrix g;
    g.K = Eigen::MatrixXd::Zero(modes, modes);
    g.horizon = horizon;
    g.quad_nodes = n;
    for (int r = 0; r < modes; ++r) {
        for (int c = r; c < modes; ++c) {
            if (bb(r, c) == 0.0) {
                continue;
            }
            double sum = 0.0;
            for (int j = 0; j <= n; ++j) {
                sum += w(j) * tables.rl(n - j, r) * tables.rl(n - j, c);
            }
            g.K(r, c) = sum * bb(r, c);
            g.K(c, r) = g.K(r, c);
        }
    }
    return g;
}

Resolvent::Resolvent(double beta, const GrammianMatrix& K) : beta_(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("resolvent parameter beta must be positive, got " + std::to_string(beta));
    }
    const Eigen::MatrixXd shifted = K.K + beta * Eigen::MatrixXd::Identity(K.size(), K.size());
    llt_.compute(shifted);
    if (llt_.info() != Eigen::Success) {
        throw Error("Cholesky factorization of beta I + K failed");
    }
}

SpectralVector Resolvent::apply(const SpectralVector& v) const {
    if (v.size() != llt_.rows()) {
        throw ShapeError("vector has " + std::to_string(v.size()) + " modes, resolvent has " +
                         std::to_string(llt_.rows()));
    }
    return SpectralVector(llt_.solve(v.coeffs));
}

SpectralVector resolvent_apply(double beta, const GrammianMatrix& K, const SpectralVector& v) {
    return Resolvent(beta, K).apply(v);
}

std::vector<double> linear_controllability_indicator(const GrammianMatrix& K, const SpectralVector& v,
                                                     std::span<const double> betas) {
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0)) {
            throw DomainError("betas must be positive");
        }
        if (i > 0 && !(betas[i] < betas[i - 1])) {
            throw DomainError("betas must be strictly decreasing");
        }
    }
    std::vector<double> out;
    out.reserve(betas.size());
    for (const double beta : betas) {
        out.push_back(beta * resolvent_apply(beta, K, v).norm());
    }
    return out;
}

} // namespace fracctl
