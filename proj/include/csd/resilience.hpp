#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csd/dynamics.hpp"

namespace csd {

// All eigenvalues of a small dense matrix (n <= 16), each verified against
// the residual contract ||A v - lambda v|| <= 1e-8 ||A||.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a);

// Strict Hurwitz test: every eigenvalue real part < -1e-9.
bool is_stable(const StateSpaceModel& model);

// Routh-Hurwitz stability boundary of the closed-loop MSD gain:
// K* = tau*(d/m + 1/tau)*(d/(m*tau) + k/m)*m - k.
double critical_gain(double m, double d, double k, double tau);

// Lower instability boundary (constant coefficient sign flip), K = -k.
double critical_gain_lower(double m, double d, double k, double tau);

// Independent route: bisection on max Re(eig) of the closed loop over
// [lo, hi]; requires a sign change across the bracket.
double critical_gain_bisection(double m, double d, double k, double tau, double lo, double hi, double tol = 1e-9);

// S = 1/(1 + H*C) as a reduced rational function. An exact pole-zero
// cancellation on the imaginary axis makes the loop ill-posed and throws.
TransferFunction sensitivity_function(const TransferFunction& plant, const TransferFunction& controller);

struct DiskMarginResult {
    double dm = 0.0;              // 0 encodes an unstable / marginal loop
    double peak_frequency = 0.0;  // rad/s; +inf when the peak is the high-frequency plateau
    double peak_magnitude = 0.0;  // achieved ||S - 1/2||_inf
    bool stable = false;
};

// DM = 1 / sup_w |S(jw) - 1/2|, evaluated on a log grid (1e-3..1e3 rad/s,
// >= 2000 points) with golden-section refinement around the grid maximum
// until the frequency bracket is below 1e-4 relative. Unstable S returns
// dm = 0 flagged, not an error, so gain sweeps cross the boundary cleanly.
DiskMarginResult disk_margin(const TransferFunction& s, std::size_t grid_points = 2048);

struct GridAxis {
    double lo = -5.0;
    double hi = 5.0;
    std::size_t points = 101;
    std::string label;

    double value(std::size_t i) const {
        return points < 2 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
};

struct ReachableSetGrid {
    std::vector<GridAxis> axes;            // 1 or 2 axes
    std::vector<std::uint8_t> membership;  // row-major over axes
    double horizon = 0.0;
    double tolerance = 0.0;
    double parameter = 0.0;  // critical-parameter value this grid belongs to
    bool past_fold = false;

    std::size_t cell_count() const;
    std::size_t member_count() const;
    bool member(std::size_t i) const { return membership[i] != 0; }
    bool member2(std::size_t ix, std::size_t iy) const;
};

// Matrix exponential by scaling and squaring with a fixed-order Pade
// approximant (the usual [13/13] scheme).
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a);

// Backward reachable set of a linear model over an (x, xdot) grid: the
// one-step transition Phi = e^{A T} is computed once and cell (x, xdot)
// with initial actuator state u0 is a member iff ||Phi (x, xdot, u0)||_inf
// <= tolerance (full-state norm).
ReachableSetGrid brs_linear(const StateSpaceModel& model, double horizon, const GridAxis& x_axis,
                            const GridAxis& v_axis, double tolerance, double u0 = 0.0, double parameter = 0.0);

// Backward reachable sets of a scalar drift for several horizons in one
// forward pass per cell (RK4, fixed dt). Membership: |x(T) - target| <=
// tolerance. A nullopt target (equilibrium vanished past the fold) yields
// empty sets with past_fold set.
std::vector<ReachableSetGrid> brs_nonlinear(const std::function<double(double)>& drift,
                                            const std::vector<double>& horizons, const GridAxis& axis,
                                            std::optional<double> target, double tolerance, double dt,
                                            double parameter = 0.0);

}  // namespace csd
