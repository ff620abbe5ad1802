#pragma once

#include "fracctl/spectral_basis.hpp"

#include <Eigen/Dense>

namespace fracctl {

/// States on the uniform grid theta_k = k a / n_t, k = 0..n_t; an element of
/// C([0, a], Z) restricted to the grid, with the sup norm over nodes.
class Trajectory {
public:
    Trajectory() = default;
    /// Zero trajectory.
    Trajectory(double horizon, int intervals, int modes);
    /// Every node equal to `state`.
    static Trajectory constant(double horizon, int intervals, const SpectralVector& state);

    double horizon() const { return horizon_; }
    int intervals() const { return intervals_; }
    int nodes() const { return intervals_ + 1; }
    int modes() const { return static_cast<int>(coeffs_.cols()); }
    double step() const { return horizon_ / intervals_; }
    double time(int k) const { return k * step(); }

    SpectralVector state(int k) const;
    void set_state(int k, const SpectralVector& v);

    /// Row k holds the coefficients at theta_k.
    const Eigen::MatrixXd& coeffs() const { return coeffs_; }
    Eigen::MatrixXd& coeffs() { return coeffs_; }

    /// max_k ||z(theta_k)||
    double sup_norm() const;

    /// Index of the grid node nearest to theta; DomainError outside [0, a].
    int nearest_node(double theta) const;

    bool same_grid(const Trajectory& other) const;

private:
    double horizon_ = 1.0;
    int intervals_ = 0;
    Eigen::MatrixXd coeffs_;
};

/// ||a - b||_C; ShapeError on mismatched grids.
double sup_distance(const Trajectory& a, const Trajectory& b);

} // namespace fracctl
