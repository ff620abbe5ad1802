#pragma once

#include "fracctl/solution_families.hpp"
#include "fracctl/spectral_basis.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace fracctl {

/// Control coefficients. For the example operator the control space starts
/// at mode 2, so coeffs(0) is u_2 and the length is N - 1.
struct ControlVector {
    Eigen::VectorXd coeffs;

    ControlVector() = default;
    explicit ControlVector(Eigen::VectorXd c) : coeffs(std::move(c)) {}

    static ControlVector zero(int dim) { return ControlVector(Eigen::VectorXd::Zero(dim)); }

    int size() const { return static_cast<int>(coeffs.size()); }
    double norm() const { return coeffs.norm(); }
    double dot(const ControlVector& o) const { return coeffs.dot(o.coeffs); }
};

/// Bounded input operator B : U -> Z stored as an N x dim(U) matrix.
class InputOperator {
public:
    explicit InputOperator(Eigen::MatrixXd matrix);

    /// B u = 2 u_2 e_1 + sum_{i >= 2} u_i e_i on N modes (N >= 2).
    static InputOperator example(int modes);
    /// Square identity; the N = 1 scalar diagnostics use this.
    static InputOperator identity(int modes);
    /// N x (N - 1) identity on modes 2..N, without the coupling into mode 1.
    static InputOperator identity_on_upper_modes(int modes);
    /// Zero operator with the example's shape (one column when N = 1).
    static InputOperator zero(int modes);

    int state_dim() const { return static_cast<int>(matrix_.rows()); }
    int control_dim() const { return static_cast<int>(matrix_.cols()); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    SpectralVector apply(const ControlVector& u) const;
    ControlVector adjoint(const SpectralVector& v) const;
    /// B B^*, N x N.
    Eigen::MatrixXd gram() const { return matrix_ * matrix_.transpose(); }
    /// Largest singular value.
    double norm() const;

private:
    Eigen::MatrixXd matrix_;
};

/// Example operator on u.size() + 1 modes.
SpectralVector apply_B(const ControlVector& u);
/// Adjoint of the example operator: (B^* v)_2 = 2 v_1 + v_2, (B^* v)_i = v_i.
ControlVector apply_B_star(const SpectralVector& v);
/// ||B|| of the example operator truncated to N >= 2 modes; sqrt(5) for all N.
double operator_norm_B(int modes);

/// K = int_0^a P_q(a - nu) B B^* P_q(a - nu) dnu on the truncated space.
struct GrammianMatrix {
    Eigen::MatrixXd K;
    double horizon = 0.0;
    int quad_nodes = 0;

    int size() const { return static_cast<int>(K.rows()); }
    double min_eigenvalue() const;
};

/// Composite trapezoid on n_quad intervals. The kernel is continuous and
/// vanishes at nu = a for q > 1, so no endpoint correction is applied.
/// Exactly symmetric by construction.
GrammianMatrix grammian(const FamilyConfig& cfg, const InputOperator& B, double horizon, int n_quad);
/// Same rule on the nodes of precomputed tables (n_quad = tables.intervals()).
GrammianMatrix grammian(const FamilyTables& tables, const InputOperator& B, double horizon);

/// (beta I + K)^{-1} with a Cholesky factorization kept for repeated solves.
class Resolvent {
public:
    Resolvent(double beta, const GrammianMatrix& K);

    double beta() const { return beta_; }
    SpectralVector apply(const SpectralVector& v) const;

private:
    double beta_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Solves (beta I + K) x = v. DomainError for beta <= 0.
SpectralVector resolvent_apply(double beta, const GrammianMatrix& K, const SpectralVector& v);

/// ||beta R(beta, K) v|| for each beta; betas must be positive and strictly
/// decreasing (DomainError otherwise). Decay towards 0 as beta -> 0 is the
/// finite-dimensional picture of approximate controllability of the linear
/// system.
std::vector<double> linear_controllability_indicator(const GrammianMatrix& K, const SpectralVector& v,
                                                     std::span<const double> betas);

} // namespace fracctl
