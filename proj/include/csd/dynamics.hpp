#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csd/series.hpp"

namespace csd {

/// Rational function of the Laplace variable s, coefficients in descending
/// powers. Realizable blocks keep deg(num) <= deg(den).
struct TransferFunction {
    std::vector<double> num;
    std::vector<double> den;

    std::size_t num_degree() const;
    std::size_t den_degree() const;
};

std::complex<double> tf_eval(const TransferFunction& tf, std::complex<double> s);

TransferFunction tf_series(const TransferFunction& a, const TransferFunction& b);

// Sensitivity-style closure 1/(1 + L).
TransferFunction tf_feedback(const TransferFunction& loop);

// Unity negative feedback from reference to output, L/(1 + L).
TransferFunction tf_closed_loop(const TransferFunction& loop);

struct StateSpaceModel {
    Eigen::MatrixXd a;     // n x n
    Eigen::MatrixXd b;     // n x m input/noise coupling
    Eigen::RowVectorXd c;  // output row (may be empty for pure state models)
    double d = 0.0;
    std::vector<std::string> state_labels;

    std::size_t order() const { return static_cast<std::size_t>(a.rows()); }
};

// Controllable-canonical realization. Biproper inputs get a feedthrough
// term; improper inputs are a realization error.
StateSpaceModel tf_to_state_space(const TransferFunction& tf);

struct MsdParams {
    double m = 1.0;
    double d = 0.9;
    double k = 0.8;
    double tau = 5.0;
    double gain = 0.0;  // controller gain K (unrestricted; K > 0 is the regulation regime)
};

// Closed-loop mass-spring-damper with first-order actuator, state (x, xdot, u):
//   A = [[0, 1, 0], [-k/m, -d/m, 1/m], [-K/tau, 0, -1/tau]]
// The b matrix couples unit noise into the first two state equations only.
StateSpaceModel msd_closed_loop(const MsdParams& p);

enum class BoxSystem {
    box1_nominal,
    box1_actuated,
    box2_nominal,
    box2_delay_only,
    box2_sensor_only,
    box2_combined,
};

// The named demonstration loops: plant 1/(s^2 + s + 1), PI controller
// (4.5 s + 0.5)/s, slow/fast first-order actuators and a resonant sensor,
// connected in series under unity negative feedback and realized in state
// space (reference in, plant output out).
StateSpaceModel box_system(BoxSystem which);
BoxSystem box_system_from_name(const std::string& name);
std::string box_system_name(BoxSystem which);

struct GrazingParams {
    double r = 1.0;      // growth rate, 1/day
    double k_cap = 10.0; // carrying capacity
    double c = 1.0;      // consumption rate
    double h = 1.0;      // half-saturation constant
    double sigma = 0.03; // multiplicative noise intensity
};

// dV/dt = r V (1 - V/K) - c V^2 / (V^2 + h^2), V >= 0.
double grazing_drift(double v, const GrazingParams& p);

// Real nonnegative equilibria of the drift (roots of the cleared-denominator
// cubic plus extinction at 0), ascending.
std::vector<double> grazing_equilibria(const GrazingParams& p);

// The equilibrium branch continued from V = k_cap at c = 0 up to p.c;
// nullopt once the branch has vanished past the fold.
std::optional<double> grazing_high_equilibrium(const GrazingParams& p);

using DriftFn = std::function<void(std::span<const double> x, std::span<double> dxdt)>;
using DiffusionFn = std::function<void(std::span<const double> x, std::span<double> g)>;

struct Trajectory {
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::vector<double> times;
    std::vector<double> data;  // row-major, rows() x state_count
    std::size_t state_count = 0;
    std::vector<std::string> state_labels;
    bool diverged = false;
    std::size_t truncated_at = npos;  // step index where the bound tripped

    std::size_t rows() const { return state_count ? times.size() : 0; }
    double state(std::size_t row, std::size_t j) const { return data[row * state_count + j]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * state_count, state_count}; }

    MultiChannelRecord to_record() const;
};

inline constexpr double divergence_bound = 1e9;

// Classical fixed-step RK4. A trajectory whose max-norm exceeds the
// divergence bound is truncated and flagged rather than thrown, so sweeps
// across unstable parameters complete.
Trajectory integrate_deterministic(const DriftFn& drift, std::span<const double> x0, double dt, double t_end,
                                   std::vector<std::string> labels = {});

// Autonomous linear model, RK4 on x' = A x.
Trajectory integrate_deterministic(const StateSpaceModel& model, std::span<const double> x0, double dt, double t_end);

// x' = A x + B u with constant unit input; the output y = C x + D u is
// appended as a final "y" channel when the model has an output row.
Trajectory step_response(const StateSpaceModel& model, double dt, double t_end);

struct SdeScenario {
    DriftFn drift;
    DiffusionFn diffusion;  // per-state noise scale g(x); independent increments per state
    std::vector<double> x0;
    double dt = 0.1;
    double t_end = 50.0;
    std::uint64_t seed = 0;
    bool clamp_nonnegative = false;  // absorb excursions below 0 (grazing model)
    std::vector<std::string> state_labels;
};

// Euler-Maruyama: x += f(x) dt + g(x) sqrt(dt) xi, one standard normal per
// state per step (in state order) from the seeded NormalSampler stream.
// Identical scenarios give bit-identical trajectories.
Trajectory simulate_sde(const SdeScenario& scenario);

// Runs n scenarios differing only in seed (base_seed + i), ordered by i.
// Diverged runs are kept and flagged, never dropped.
std::vector<Trajectory> run_batch(const SdeScenario& base, std::size_t n_runs, std::uint64_t base_seed);

// Paper-recipe scenario builders.
SdeScenario msd_scenario(const MsdParams& p, double sigma, double dt, double t_end, std::uint64_t seed);
SdeScenario grazing_scenario(const GrazingParams& p, double dt, double t_end, std::uint64_t seed,
                             std::optional<double> v0 = std::nullopt);

}  // namespace csd
