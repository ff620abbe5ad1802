#include "fracctl/trajectory.hpp"

#include "fracctl/errors.hpp"

#include <cmath>
#include <string>

namespace fracctl {

Trajectory::Trajectory(double horizon, int intervals, int modes)
    : horizon_(horizon), intervals_(intervals) {
    if (!(horizon > 0.0)) {
        throw ValidationError("a", "horizon must be positive");
    }
    if (intervals < 1) {
        throw ValidationError("n_t", "need at least one interval");
    }
    coeffs_ = Eigen::MatrixXd::Zero(intervals + 1, modes);
}

Trajectory Trajectory::constant(double horizon, int intervals, const SpectralVector& state) {
    Trajectory traj(horizon, intervals, state.size());
    traj.coeffs_.rowwise() = state.coeffs.transpose();
    return traj;
}

SpectralVector Trajectory::state(int k) const {
    if (k < 0 || k >= nodes()) {
        throw IndexError("node " + std::to_string(k) + " outside 0.." + std::to_string(intervals_));
    }
    return SpectralVector(coeffs_.row(k).transpose());
}

void Trajectory::set_state(int k, const SpectralVector& v) {
    if (k < 0 || k >= nodes()) {
        throw IndexError("node " + std::to_string(k) + " outside 0.." + std::to_string(intervals_));
    }
    if (v.size() != modes()) {
        throw ShapeError("state has " + std::to_string(v.size()) + " modes, trajectory has " +
                         std::to_string(modes()));
    }
    coeffs_.row(k) = v.coeffs.transpose();
}

double Trajectory::sup_norm() const {
    return coeffs_.rows() == 0 ? 0.0 : coeffs_.rowwise().norm().maxCoeff();
}

int Trajectory::nearest_node(double theta) const {
    if (!(theta >= 0.0 && theta <= horizon_)) {
        throw DomainError("time " + std::to_string(theta) + " outside [0, a]");
    }
    return static_cast<int>(std::lround(theta / step()));
}

bool Trajectory::same_grid(const Trajectory& other) const {
    return intervals_ == other.intervals_ && horizon_ == other.horizon_ && modes() == other.modes();
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
    if (!a.same_grid(b)) {
        throw ShapeError("trajectories live on different grids");
    }
    return (a.coeffs() - b.coeffs()).rowwise().norm().maxCoeff();
}

} // namespace fracctl
