#pragma once

#include <functional>

#include "gamedesign/game.hpp"
#include "gamedesign/trajectory.hpp"

namespace gamedesign {

/// Price signal feeding the game dynamics: constant vector, feedback law or
/// replayed series — anything callable on (t, x).
using PriceSource = std::function<PriceVector(double t, const ActionVector& x)>;

inline PriceSource constant_price(PriceVector alpha) {
  return [alpha = std::move(alpha)](double, const ActionVector&) {
    return alpha;
  };
}

enum class Integrator { Euler, RK4 };

/// Integrates the gradient play xdot_i = -dJ_i/dx_i under the given price
/// source. Euler mirrors the discrete per-iteration updates of the games
/// being modeled; RK4 is available for smooth-accuracy checks.
Trajectory game_flow(const GameSpec& game, const PriceSource& alpha,
                     const ActionVector& x0, double dt, double T,
                     Integrator integrator = Integrator::Euler,
                     int record_every = 1);

/// Steady-state control c(x_hat) solving 0 = f(x_hat) + G(x_hat) c. For the
/// shared cost structure this coincides with the static design formula.
PriceVector steady_state_price(const GameSpec& game,
                               const ActionVector& x_hat);

struct ControllerSpec {
  enum class Mode { SteadyStatePlusGain, IntegralAugmented };
  Mode mode = Mode::SteadyStatePlusGain;
  Vector lambda1;        // desired per-channel pole magnitudes, > 0
  Vector lambda2;        // integral coefficients, > 0 (integral mode)
  ActionVector target;   // x_hat

  void validate(int n_players) const;
};

struct LinearizedPlant {
  Matrix A;  // Jacobian of f at x_hat
  Matrix B;  // control channel G(x_hat)
};

LinearizedPlant linearize_plant(const GameSpec& game,
                                const ActionVector& x_hat);

struct RegulationGains {
  Matrix K;
  Matrix Ki;           // empty in proportional mode
  Matrix closed_loop;  // N x N or 2N x 2N with integral augmentation
  double max_real_eigenvalue = 0.0;
};

/// Pole placement specialized to invertible B: proportional mode pins
/// A + B K = -diag(lambda1); integral mode adds K_I = B^{-1}(-diag(lambda2))
/// for a per-channel characteristic s^2 + lambda1 s + lambda2. The closed
/// loop eigenvalues are recomputed and checked regardless.
RegulationGains regulation_gain(const LinearizedPlant& plant,
                                const ControllerSpec& spec);

struct RegulationResult {
  Trajectory trajectory;
  double final_error = 0.0;  // ||x(T) - x_hat||
  RegulationGains gains;
  PriceVector steady_price;
};

/// Closed-loop simulation with alpha(t) = c(x_hat) + K (x - x_hat)
/// (+ K_I sigma with sigmadot = x - x_hat in integral mode). An optional
/// constant disturbance is added to the drift f.
RegulationResult regulate(const GameSpec& game, const ControllerSpec& spec,
                          const ActionVector& x0, double dt, double T,
                          const Vector& disturbance = Vector(),
                          int record_every = 1);

struct ReachabilityReport {
  int rank = 0;
  int columns = 0;
  std::vector<double> singular_values;
  bool conditioning_warning = false;
};

/// Rank of the reachability distribution at x0. Depth 0 uses the control
/// columns g_i; depth 1 adds the brackets [f, g_i] and [g_i, g_j]; depth 2
/// adds ad^2_f g_i. The drift is taken at the operating prices alpha0, and
/// brackets are formed by nested central differences.
ReachabilityReport reachability_rank(const GameSpec& game,
                                     const PriceVector& alpha0,
                                     const ActionVector& x0, int depth);

}  // namespace gamedesign
