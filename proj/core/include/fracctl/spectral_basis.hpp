#pragma once

#include <Eigen/Dense>

#include <numbers>

namespace fracctl {

/// Pointwise values of a state on the interior collocation grid.
using Samples = Eigen::VectorXd;

/// Truncated Dirichlet sine basis on (0, L).
struct BasisConfig {
    double length = std::numbers::pi; ///< L
    int modes = 6;                    ///< N
    int collocation = 13;             ///< Ny, at least 2N + 1

    /// N modes with the minimal collocation grid Ny = 2N + 1.
    static BasisConfig with_modes(int modes, double length = std::numbers::pi);

    void validate() const;
};

/// State coefficients against the orthonormal functions e_n, n = 1..N.
struct SpectralVector {
    Eigen::VectorXd coeffs;

    SpectralVector() = default;
    explicit SpectralVector(Eigen::VectorXd c) : coeffs(std::move(c)) {}

    static SpectralVector zero(int modes) { return SpectralVector(Eigen::VectorXd::Zero(modes)); }
    /// e_mode, 1-based.
    static SpectralVector unit(int modes, int mode);

    int size() const { return static_cast<int>(coeffs.size()); }
    double norm() const { return coeffs.norm(); }
    double dot(const SpectralVector& o) const { return coeffs.dot(o.coeffs); }
    /// 1-based coefficient access, matching the mode numbering.
    double mode(int n) const { return coeffs(n - 1); }

    SpectralVector& operator+=(const SpectralVector& o) { coeffs += o.coeffs; return *this; }
    SpectralVector& operator-=(const SpectralVector& o) { coeffs -= o.coeffs; return *this; }
    SpectralVector& operator*=(double s) { coeffs *= s; return *this; }
    bool operator==(const SpectralVector& o) const { return coeffs == o.coeffs; }
};

inline SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
inline SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
inline SpectralVector operator*(double s, SpectralVector a) { return a *= s; }

/// mu_n = (n pi / L)^2; the generator acts on mode n as multiplication by -mu_n.
double eigenvalue(const BasisConfig& cfg, int n);

/// e_n(y) = sqrt(2/L) sin(n pi y / L).
double eigenfunction_at(const BasisConfig& cfg, int n, double y);

/// Interior grid y_m = m L / (Ny + 1), m = 1..Ny.
Eigen::VectorXd collocation_grid(const BasisConfig& cfg);

/// Coefficient <-> sample transforms on the collocation grid. The projection
/// is the composite trapezoid rule; the endpoint terms vanish because every
/// e_n does, and the sampled sines are discretely orthogonal for n <= Ny, so
/// analyze(synthesize(v)) == v up to rounding.
class CollocationTransform {
public:
    explicit CollocationTransform(const BasisConfig& cfg);

    Samples synthesize(const SpectralVector& v) const;
    SpectralVector analyze(const Samples& samples) const;

    /// Ny x N matrix of e_n(y_m).
    const Eigen::MatrixXd& synthesis_matrix() const { return synthesis_; }
    const Eigen::VectorXd& grid() const { return grid_; }
    double weight() const { return weight_; }

private:
    BasisConfig cfg_;
    Eigen::VectorXd grid_;
    Eigen::MatrixXd synthesis_;
    double weight_;
};

/// Samples of v on `grid`; the grid must be collocation_grid(cfg).
Samples synthesize(const BasisConfig& cfg, const SpectralVector& v, const Eigen::VectorXd& grid);

SpectralVector analyze(const BasisConfig& cfg, const Samples& samples);

} // namespace fracctl
