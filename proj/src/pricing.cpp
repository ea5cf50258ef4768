#include "gamedesign/pricing.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gamedesign/errors.hpp"

namespace gamedesign {

double welfare(const GameSpec& game, const ActionVector& x) {
  require_size(x, game.n_players, "x");
  double u = 0.0;
  for (int i = 0; i < game.n_players; ++i) u += game.utility->value(i, x);
  return u;
}

Vector welfare_gradient(const GameSpec& game, const ActionVector& x) {
  require_size(x, game.n_players, "x");
  const int n = game.n_players;
  Vector g = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g[j] += game.utility->partial(i, j, x);
  }
  return g;
}

void TwoTimescaleConfig::validate() const {
  if (epsilon <= 0.0) throw DomainError("TwoTimescaleConfig: epsilon > 0 required");
  if (inner_steps_per_outer < 1) {
    throw DomainError("TwoTimescaleConfig: inner_steps_per_outer >= 1 required");
  }
  if (dt_fast <= 0.0) throw DomainError("TwoTimescaleConfig: dt_fast > 0 required");
  if (outer_iters < 0) throw DomainError("TwoTimescaleConfig: outer_iters >= 0 required");
  if (outer_step <= 0.0) throw DomainError("TwoTimescaleConfig: outer_step > 0 required");
  if (step_growth < 1.0) throw DomainError("TwoTimescaleConfig: step_growth >= 1 required");
}

namespace {

constexpr double kSingularHTol = 1e-12;
constexpr double kDivergenceNorm = 1e12;
constexpr double kMaxOuterStep = 1e12;

/// Welfare gradient as the pricing mechanism sees it: the per-player
/// reduced sum for separable utilities, the full gradient otherwise.
Vector pricing_welfare_gradient(const GameSpec& game, const ActionVector& x) {
  if (game.utility->separable()) {
    Vector g(game.n_players);
    for (int j = 0; j < game.n_players; ++j) {
      g[j] = game.utility->partial(j, j, x);
    }
    return g;
  }
  return welfare_gradient(game, x);
}

Matrix price_map_jacobian(const GameSpec& game, const PriceVector& alpha,
                          HSource h_source, const SolverSettings& solver) {
  return h_source == HSource::Analytic
             ? ne_map_jacobian(game, alpha, solver)
             : fd_ne_map_jacobian(game, alpha, solver);
}

/// One backtracking price step against a scalar potential. Trials that throw
/// (e.g. a closed form losing its domain) or produce NaN are rejected like
/// any ascent of the potential. Returns the accepted step size; zero when
/// every halving failed.
struct StepOutcome {
  PriceVector alpha;
  double potential = 0.0;
  double accepted_step = 0.0;
  int clamped = 0;
};

StepOutcome backtrack_price_step(
    const PriceVector& alpha, const Vector& rhs, double step, double potential,
    int max_halvings, bool adapt,
    const std::function<double(const PriceVector&)>& eval_potential) {
  StepOutcome out;
  double h = step;
  const double tol = 1e-12 * (1.0 + std::abs(potential));
  for (int attempt = 0; attempt <= (adapt ? max_halvings : 0); ++attempt) {
    PriceVector trial = alpha + h * rhs;
    const int clamped = clamp_prices(trial);
    double value;
    bool ok = true;
    try {
      value = eval_potential(trial);
    } catch (const GameError&) {
      ok = false;
      value = std::numeric_limits<double>::quiet_NaN();
    }
    if (!adapt) {
      if (!ok) throw DivergenceError("pricing loop: price step left the model domain");
      out.alpha = trial;
      out.potential = value;
      out.accepted_step = h;
      out.clamped = clamped;
      return out;
    }
    if (ok && value <= potential + tol) {
      out.alpha = trial;
      out.potential = value;
      out.accepted_step = h;
      out.clamped = clamped;
      return out;
    }
    h *= 0.5;
  }
  out.alpha = alpha;  // stalled: keep the current prices
  out.potential = potential;
  out.accepted_step = 0.0;
  return out;
}

}  // namespace

PriceOdeEval price_ode_rhs(const GameSpec& game, const PriceVector& alpha,
                           HSource h_source, const SolverSettings& solver,
                           const ActionVector* x_hint) {
  require_size(alpha, game.n_players, "alpha");
  PriceOdeEval eval;
  eval.x_star = ne_point(game, alpha, solver, x_hint);
  eval.H = price_map_jacobian(game, alpha, h_source, solver);
  eval.near_singular_H = std::abs(eval.H.determinant()) < kSingularHTol;
  eval.welfare_grad = pricing_welfare_gradient(game, eval.x_star);
  eval.alpha_dot = eval.H.transpose() * eval.welfare_grad;
  return eval;
}

Trajectory run_pricing_loop(const GameSpec& game, const PriceVector& alpha0,
                            const TwoTimescaleConfig& cfg, bool assume_settled,
                            const ActionVector* x0) {
  cfg.validate();
  require_size(alpha0, game.n_players, "alpha0");

  Trajectory traj;
  traj.n_players = game.n_players;
  traj.metric_kind = metric_kind_for(game);

  PriceVector alpha = alpha0;
  traj.clamped_prices += clamp_prices(alpha);

  auto settled_potential = [&](const PriceVector& a) {
    return -welfare(game, ne_point(game, a, cfg.inner_solver));
  };

  bool singular_noted = false;
  auto note_singular = [&](bool near_singular) {
    if (near_singular && !singular_noted) {
      traj.notes.push_back("near-singular H encountered");
      singular_noted = true;
    }
  };

  double h = cfg.outer_step;
  if (assume_settled) {
    ActionVector x_star = ne_point(game, alpha, cfg.inner_solver, x0);
    double potential = -welfare(game, x_star);
    traj.push(0.0, x_star, alpha, -potential, potential,
              metrics_db(game, x_star));
    double t = 0.0;
    for (int k = 0; k < cfg.outer_iters; ++k) {
      const PriceOdeEval eval =
          price_ode_rhs(game, alpha, cfg.h_source, cfg.inner_solver, &x_star);
      note_singular(eval.near_singular_H);
      const StepOutcome out = backtrack_price_step(
          alpha, eval.alpha_dot, h, potential, cfg.max_halvings,
          cfg.adapt_step, settled_potential);
      alpha = out.alpha;
      potential = out.potential;
      traj.clamped_prices += out.clamped;
      if (out.accepted_step > 0.0) {
        h = cfg.adapt_step
                ? std::min(out.accepted_step * cfg.step_growth, kMaxOuterStep)
                : cfg.outer_step;
        t += out.accepted_step;
      } else {
        t += h;  // stalled step: time advances, prices do not
      }
      x_star = ne_point(game, alpha, cfg.inner_solver, &x_star);
      traj.push(t, x_star, alpha, welfare(game, x_star), potential,
                metrics_db(game, x_star));
    }
    return traj;
  }

  // Full two-timescale loop: blocks of fast gradient-play steps between
  // price updates. With inner_steps_per_outer = round(1/epsilon), one block
  // spans one slow time unit per epsilon of fast time.
  if (!x0) {
    throw DomainError("run_pricing_loop: x0 required for the full loop");
  }
  ActionVector x = *x0;
  require_size(x, game.n_players, "x0");

  double reduced_potential = settled_potential(alpha);
  traj.push(0.0, x, alpha, welfare(game, x), -welfare(game, x),
            metrics_db(game, x));
  for (int k = 0; k < cfg.outer_iters; ++k) {
    for (int s = 0; s < cfg.inner_steps_per_outer; ++s) {
      x -= cfg.dt_fast * pseudo_gradient(game, alpha, x);
      if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > kDivergenceNorm) {
        throw DivergenceError("pricing loop: fast state diverged");
      }
    }
    const Matrix H = price_map_jacobian(game, alpha, cfg.h_source, cfg.inner_solver);
    note_singular(std::abs(H.determinant()) < kSingularHTol);
    const Vector rhs = H.transpose() * pricing_welfare_gradient(game, x);
    const StepOutcome out = backtrack_price_step(
        alpha, rhs, h, reduced_potential, cfg.max_halvings, cfg.adapt_step,
        settled_potential);
    alpha = out.alpha;
    reduced_potential = out.potential;
    traj.clamped_prices += out.clamped;
    if (out.accepted_step > 0.0 && cfg.adapt_step) {
      h = std::min(out.accepted_step * cfg.step_growth, kMaxOuterStep);
    }
    const double t = (k + 1) * cfg.inner_steps_per_outer * cfg.dt_fast;
    traj.push(t, x, alpha, welfare(game, x), -welfare(game, x),
              metrics_db(game, x));
  }
  return traj;
}

PenaltyEval penalty_price_rhs(const WirelessSirGame& game,
                              const PriceVector& alpha,
                              const PenaltySpec& spec) {
  game.validate();
  const int n = game.players();
  require_size(alpha, n, "alpha");
  require_size(spec.s_bar, n, "s_bar");

  WirelessSirGame qos = game;
  qos.s_bar = spec.s_bar;
  const Matrix S = qos.qos_matrix();
  const Vector b = qos.qos_offset();

  PenaltyEval eval;
  eval.x_star = wireless_ne(game, alpha);
  const Vector sx = S * eval.x_star;

  eval.violations = Vector::Zero(n);
  Vector drho = Vector::Zero(n);
  eval.penalty_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s_j = sir(eval.x_star, game, j);
    const double z = b[j] - sx[j];
    if (s_j < spec.s_bar[j] && z > 0.0) {
      eval.violations[j] = z;
      eval.penalty_sum += spec.f(z);
      // rho_j depends on x through (S x)_j; diagonal partial on the active
      // branch: drho_j/dx_j = -f'(z) S_jj.
      drho[j] = -spec.f_prime(z) * S(j, j);
    }
  }

  // Sensitivity of the equilibrium by central differences of the closed form.
  Matrix H(n, n);
  for (int j = 0; j < n; ++j) {
    const double d = 1e-4 * (1.0 + std::abs(alpha[j]));
    PriceVector ap = alpha, am = alpha;
    ap[j] += d;
    am[j] -= d;
    H.col(j) = (wireless_ne(game, ap) - wireless_ne(game, am)) / (2.0 * d);
  }

  eval.alpha_dot = -(H.transpose() * drho);
  return eval;
}

Trajectory run_penalty_loop(const WirelessSirGame& game,
                            const PriceVector& alpha0, const PenaltySpec& spec,
                            int outer_iters, double outer_step,
                            bool adapt_step) {
  GameSpec generic = game.to_game_spec();
  Trajectory traj;
  traj.n_players = game.players();
  traj.metric_kind = MetricKind::SirDb;

  PriceVector alpha = alpha0;
  traj.clamped_prices += clamp_prices(alpha);
  // wireless closed form needs strictly positive prices
  alpha = alpha.cwiseMax(1e-9);

  auto potential_of = [&](const PriceVector& a) {
    PriceVector floored = a.cwiseMax(1e-9);
    return penalty_price_rhs(game, floored, spec).penalty_sum;
  };

  PenaltyEval eval = penalty_price_rhs(game, alpha, spec);
  double potential = eval.penalty_sum;
  double t = 0.0;
  double h = outer_step;
  auto record = [&]() {
    traj.push(t, eval.x_star, alpha, welfare(generic, eval.x_star), potential,
              metrics_db(generic, eval.x_star));
  };
  record();

  for (int k = 0; k < outer_iters; ++k) {
    if (eval.alpha_dot.lpNorm<Eigen::Infinity>() == 0.0) break;  // inside QoS region
    const StepOutcome out =
        backtrack_price_step(alpha, eval.alpha_dot, h, potential, 60,
                             adapt_step, potential_of);
    alpha = out.alpha.cwiseMax(1e-9);
    potential = out.potential;
    if (out.accepted_step > 0.0 && adapt_step) {
      h = std::min(out.accepted_step * 2.0, kMaxOuterStep);
    }
    t += out.accepted_step > 0.0 ? out.accepted_step : h;
    eval = penalty_price_rhs(game, alpha, spec);
    record();
  }
  return traj;
}

LyapunovReport lyapunov_monitor(const Trajectory& trajectory,
                                const GameSpec& game, LyapunovKind kind,
                                const PenaltySpec* penalty,
                                const WirelessSirGame* wireless) {
  LyapunovReport report;
  const std::size_t rows = trajectory.rows();
  report.v.reserve(rows);

  for (std::size_t k = 0; k < rows; ++k) {
    double v;
    switch (kind) {
      case LyapunovKind::Penalty: {
        if (!penalty || !wireless) {
          throw DomainError(
              "lyapunov_monitor: penalty runs need the game and spec");
        }
        WirelessSirGame qos = *wireless;
        qos.s_bar = penalty->s_bar;
        const Vector sx = qos.qos_matrix() * trajectory.x[k];
        const Vector b = qos.qos_offset();
        v = 0.0;
        for (int j = 0; j < qos.players(); ++j) {
          const double s_j = sir(trajectory.x[k], *wireless, j);
          if (s_j < penalty->s_bar[j]) v += penalty->f(b[j] - sx[j]);
        }
        break;
      }
      default:
        v = -welfare(game, trajectory.x[k]);
        break;
    }
    report.v.push_back(v);
    if (k > 0) {
      report.max_increment =
          std::max(report.max_increment, report.v[k] - report.v[k - 1]);
    }
  }

  if (kind == LyapunovKind::WelfareFull) {
    report.boundary_layer.reserve(rows);
    for (std::size_t k = 0; k < rows; ++k) {
      const Vector phi =
          pseudo_gradient(game, trajectory.alpha[k], trajectory.x[k]);
      report.boundary_layer.push_back(0.5 * phi.squaredNorm());
      if (k > 0) {
        report.max_increment_boundary_layer =
            std::max(report.max_increment_boundary_layer,
                     report.boundary_layer[k] - report.boundary_layer[k - 1]);
      }
    }
  }
  return report;
}

}  // namespace gamedesign
