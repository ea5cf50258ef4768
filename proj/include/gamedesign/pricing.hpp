#pragma once

#include "gamedesign/catalog.hpp"
#include "gamedesign/solver.hpp"
#include "gamedesign/trajectory.hpp"

namespace gamedesign {

/// Social welfare U(x) = sum_i U_i(x).
double welfare(const GameSpec& game, const ActionVector& x);

/// Full gradient of the welfare: component j is sum_i dU_i/dx_j, cross
/// terms included.
Vector welfare_gradient(const GameSpec& game, const ActionVector& x);

enum class HSource { Analytic, FiniteDifference };

struct TwoTimescaleConfig {
  double epsilon = 0.01;          // timescale ratio
  int inner_steps_per_outer = 100;
  double dt_fast = 1e-5;
  int outer_iters = 50;
  HSource h_source = HSource::Analytic;

  // Slow-loop step policy: Euler step starting at outer_step, halved on a
  // lyapunov increase and grown on accepted steps while adapt_step is on.
  double outer_step = 1.0;
  bool adapt_step = true;
  double step_growth = 2.0;
  int max_halvings = 60;

  SolverSettings inner_solver = SolverSettings::best_response();

  static TwoTimescaleConfig with_epsilon(double eps) {
    TwoTimescaleConfig cfg;
    cfg.epsilon = eps;
    cfg.inner_steps_per_outer = static_cast<int>(std::lround(1.0 / eps));
    return cfg;
  }

  void validate() const;
};

struct PriceOdeEval {
  Vector alpha_dot;
  ActionVector x_star;
  Matrix H;
  Vector welfare_grad;
  bool near_singular_H = false;
};

/// Right-hand side of the welfare-seeking pricing mechanism
/// alphadot = H^T(alpha) grad U(x*) with the fast dynamics settled at
/// x* = T(alpha). Separable utilities use the reduced per-player sum, which
/// coincides with the vector form.
PriceOdeEval price_ode_rhs(const GameSpec& game, const PriceVector& alpha,
                           HSource h_source = HSource::Analytic,
                           const SolverSettings& solver = SolverSettings::best_response(),
                           const ActionVector* x_hint = nullptr);

/// Runs the pricing loop. assume_settled=true integrates only the slow
/// dynamics on the equilibrium map; assume_settled=false runs the full
/// two-timescale loop: inner_steps_per_outer Euler steps of the gradient
/// play per pricing update. Negative prices are clamped to zero and counted.
Trajectory run_pricing_loop(const GameSpec& game, const PriceVector& alpha0,
                            const TwoTimescaleConfig& cfg, bool assume_settled,
                            const ActionVector* x0 = nullptr);

struct PenaltySpec {
  Vector s_bar;  // target SIR levels
  // f(z) = z^2 for z > 0, else 0 (smooth, nondecreasing, f(0) = f'(0) = 0)
  double f(double z) const { return z > 0.0 ? z * z : 0.0; }
  double f_prime(double z) const { return z > 0.0 ? 2.0 * z : 0.0; }
};

struct PenaltyEval {
  Vector alpha_dot;
  ActionVector x_star;
  Vector violations;   // b_j - (S x*)_j on the active branch, else 0
  double penalty_sum;  // sum_j rho_j(x*)
};

/// Penalty pricing for the wireless QoS region: descends
/// Phi(alpha) = sum_j rho_j(x*(alpha)) along alphadot_i =
/// -sum_j drho_j/dx_j (x*) dx*_j/dalpha_i, with the sensitivity taken by
/// central differences of the closed-form equilibrium.
PenaltyEval penalty_price_rhs(const WirelessSirGame& game,
                              const PriceVector& alpha,
                              const PenaltySpec& spec);

/// Settled-mode penalty pricing loop; stops early once the equilibrium
/// satisfies every SIR target.
Trajectory run_penalty_loop(const WirelessSirGame& game,
                            const PriceVector& alpha0,
                            const PenaltySpec& spec, int outer_iters,
                            double outer_step = 1.0, bool adapt_step = true);

enum class LyapunovKind { WelfareSettled, WelfareFull, Penalty };

struct LyapunovReport {
  std::vector<double> v;        // -U(x) series (or sum rho for penalty runs)
  double max_increment = 0.0;   // largest rise between consecutive samples
  std::vector<double> boundary_layer;  // 1/2 sum phi_i^2, full mode only
  double max_increment_boundary_layer = 0.0;
};

/// Recomputes the Lyapunov series from a recorded trajectory and reports the
/// largest increase between consecutive outer samples.
LyapunovReport lyapunov_monitor(const Trajectory& trajectory,
                                const GameSpec& game,
                                LyapunovKind kind = LyapunovKind::WelfareSettled,
                                const PenaltySpec* penalty = nullptr,
                                const WirelessSirGame* wireless = nullptr);

}  // namespace gamedesign
