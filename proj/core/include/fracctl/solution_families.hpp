#pragma once

#include "fracctl/spectral_basis.hpp"
#include "fracctl/trajectory.hpp"

#include <Eigen/Dense>

#include <span>

namespace fracctl {

/// Order-q solution families of the Dirichlet Laplacian on the truncated
/// sine basis.
struct FamilyConfig {
    double q = 1.5;    ///< fractional order, 1 < q <= 2
    BasisConfig basis;
    double M = 1.0;    ///< uniform bound sup ||C_q(theta)||, >= 1

    /// Config whose M is measured on [0, theta_max].
    static FamilyConfig measured(double q, const BasisConfig& basis, double theta_max);

    void validate() const;
};

/// Scalar kernels for one mode with eigenvalue mu:
///   cosine:  E_q(-mu t^q)
///   sine:    t E_{q,2}(-mu t^q)        (time integral of the cosine kernel)
///   rl:      t^{q-1} E_{q,q}(-mu t^q)  (order q-1 integral of the cosine kernel)
double cosine_kernel(double q, double mu, double t);
double sine_kernel(double q, double mu, double t);
double rl_kernel(double q, double mu, double t);

/// C_q(theta) v. Returns v unchanged at theta = 0.
SpectralVector cq_apply(const FamilyConfig& cfg, double theta, const SpectralVector& v);
/// S_q(theta) v = int_0^theta C_q(nu) v dnu.
SpectralVector sq_apply(const FamilyConfig& cfg, double theta, const SpectralVector& v);
/// P_q(theta) v = I^{q-1} C_q(theta) v; zero at theta = 0.
SpectralVector pq_apply(const FamilyConfig& cfg, double theta, const SpectralVector& v);

/// max over modes n <= N and a uniform grid of `grid_points` + 1 times in
/// [0, theta_max] of |E_q(-mu_n theta^q)|. At least 1 (theta = 0).
double measure_cosine_bound(const FamilyConfig& cfg, double theta_max, int grid_points = 1000);

/// Kernel values at the offsets k h, k = 0..n_t; row k, column mode - 1.
struct FamilyTables {
    double step = 0.0;
    Eigen::MatrixXd cosine;
    Eigen::MatrixXd sine;
    Eigen::MatrixXd rl;

    int intervals() const { return static_cast<int>(cosine.rows()) - 1; }
};

FamilyTables tabulate(const FamilyConfig& cfg, double horizon, int intervals);

/// Trapezoid weights on n + 1 uniformly spaced nodes with step h.
Eigen::VectorXd trapezoid_weights(int intervals, double step);

/// Mode-wise Duhamel formula for the linear problem
///   z(theta_k) = C_q(theta_k) z0 + S_q(theta_k) z1
///              + sum_j w_j P_q(theta_k - theta_j) forcing(theta_j),
/// with trapezoid weights w_j on [0, theta_k]. `grid` must be uniform,
/// start at 0, and match `forcing` in length (ShapeError otherwise).
Trajectory duhamel_linear(const FamilyConfig& cfg, const SpectralVector& z0, const SpectralVector& z1,
                          std::span<const SpectralVector> forcing, std::span<const double> grid);

} // namespace fracctl
