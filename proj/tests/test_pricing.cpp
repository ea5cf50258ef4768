#include <doctest.h>

#include <random>

#include "gamedesign/design.hpp"
#include "gamedesign/pricing.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gamedesign;

namespace {

// social optimum of the link study, solved independently
Vector sec6_social_max(const GameSpec& game) {
  Box box = game.box();
  box.lower = Vector::Constant(2, 1e-4);
  const auto r = oracle::brute_welfare_max(game, box);
  REQUIRE(r.converged);
  return r.value;
}

TwoTimescaleConfig sec6_config() {
  TwoTimescaleConfig cfg = TwoTimescaleConfig::with_epsilon(0.01);
  cfg.dt_fast = 1e-5;
  cfg.outer_iters = 50;
  return cfg;
}

}  // namespace

TEST_CASE("welfare_gradient: separable games have no cross terms") {
  SeparableLogGame sep;
  sep.beta = (Vector(3) << 3.0, 4.0, 5.0).finished();
  sep.k = Vector::Ones(3);
  GameSpec game = sep.to_game_spec();
  const Vector x = (Vector(3) << 0.4, 1.2, 2.0).finished();
  const Vector g = welfare_gradient(game, x);
  for (int j = 0; j < 3; ++j) {
    CHECK(g[j] == doctest::Approx(game.utility->partial(j, j, x)).epsilon(1e-14));
  }
}

TEST_CASE("welfare_gradient: optical link matches finite differences") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector x = testing::random_vector(rng, 2, 1e-3, 0.06);
    const Vector g = welfare_gradient(game, x);
    for (int j = 0; j < 2; ++j) {
      const double fd = testing::fd_partial(
          [&](const Vector& p) { return welfare(game, p); }, x, j);
      CHECK(g[j] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("welfare_gradient: vanishes at the independent maximizer") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x_hat = sec6_social_max(game);
  CHECK(welfare_gradient(game, x_hat).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("price_ode_rhs: stationary at the designed social optimum") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x_hat = sec6_social_max(game);
  const DesignResult d = design_price(game, x_hat);
  REQUIRE(d.feasible);
  const PriceOdeEval eval = price_ode_rhs(game, d.alpha);
  CHECK(eval.alpha_dot.lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK_FALSE(eval.near_singular_H);
}

TEST_CASE("price_ode_rhs: separable reduction in closed form") {
  // with linear-sum pricing the equilibrium response gives
  // alphadot_i = -alpha_i beta_i / (alpha_i + k_i)^2
  SeparableLogGame sep;
  sep.beta = (Vector(2) << 3.0, 5.0).finished();
  sep.k = (Vector(2) << 1.0, 0.5).finished();
  GameSpec game = sep.to_game_spec();
  const Vector alpha = (Vector(2) << 1.0, 2.0).finished();
  const PriceOdeEval eval = price_ode_rhs(game, alpha);
  for (int i = 0; i < 2; ++i) {
    const double d = alpha[i] + sep.k[i];
    const double expected = -alpha[i] * sep.beta[i] / (d * d);
    CHECK(eval.alpha_dot[i] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(eval.alpha_dot[i] < 0.0);  // pushes toward the zero-price optimum
  }
}

TEST_CASE("price_ode_rhs: descends the negative welfare potential") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector alpha = (Vector(2) << 18.35, 19.23).finished();
  const PriceOdeEval eval = price_ode_rhs(game, alpha);
  const double v0 = -welfare(game, ne_point(game, alpha));
  const double h = 1e-3 / eval.alpha_dot.lpNorm<Eigen::Infinity>();
  const Vector stepped = alpha + h * eval.alpha_dot;
  const double v1 = -welfare(game, ne_point(game, stepped));
  CHECK(v1 < v0);
}

TEST_CASE("price_ode_rhs: finite differences agree with the analytic route") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector alpha = (Vector(2) << 30.0, 35.0).finished();
  const PriceOdeEval a = price_ode_rhs(game, alpha, HSource::Analytic);
  const PriceOdeEval b = price_ode_rhs(game, alpha, HSource::FiniteDifference);
  CHECK(((a.alpha_dot - b.alpha_dot).cwiseAbs().maxCoeff()) <
        1e-4 * (1.0 + a.alpha_dot.cwiseAbs().maxCoeff()));
}

TEST_CASE("run_pricing_loop: settled mode reaches the social optimum") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x_hat = sec6_social_max(game);
  const Vector alpha_hat = design_price(game, x_hat).alpha;

  const Trajectory traj = run_pricing_loop(
      game, (Vector(2) << 18.35, 19.23).finished(), sec6_config(), true);
  CHECK((traj.x.back() - x_hat).lpNorm<Eigen::Infinity>() < 1e-4 * x_hat.norm() + 1e-6);
  CHECK((traj.alpha.back() - alpha_hat).lpNorm<Eigen::Infinity>() < 0.05);

  const LyapunovReport monitor =
      lyapunov_monitor(traj, game, LyapunovKind::WelfareSettled);
  CHECK(monitor.max_increment < 1e-6 * std::abs(monitor.v.front()));
}

TEST_CASE("run_pricing_loop: full loop reproduces the published study") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x0 = Vector::Constant(2, 4.3e-4);
  const Trajectory traj = run_pricing_loop(
      game, (Vector(2) << 18.35, 19.23).finished(), sec6_config(), false, &x0);

  const Vector x_pub = testing::sec6_published_x();
  const Vector a_pub = testing::sec6_published_alpha();
  CHECK(((traj.x.back() - x_pub).cwiseQuotient(x_pub)).lpNorm<Eigen::Infinity>() <
        0.02);
  CHECK(((traj.alpha.back() - a_pub).cwiseQuotient(a_pub))
            .lpNorm<Eigen::Infinity>() < 0.02);
  const Vector osnr_db = metrics_db(game, traj.x.back());
  CHECK((osnr_db.array() - 23.0).abs().maxCoeff() < 0.5);
}

TEST_CASE("run_pricing_loop: stationary when started at the equilibrium") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x_hat = sec6_social_max(game);
  const Vector alpha_hat = design_price(game, x_hat).alpha;

  TwoTimescaleConfig cfg = sec6_config();
  cfg.outer_iters = 10;
  const Trajectory traj = run_pricing_loop(game, alpha_hat, cfg, false, &x_hat);
  CHECK((traj.x.back() - x_hat).lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK((traj.alpha.back() - alpha_hat).lpNorm<Eigen::Infinity>() < 1e-3);
}

TEST_CASE("run_pricing_loop: separable limit matches the scalar maximizer") {
  SeparableLogGame sep;
  sep.beta = (Vector(2) << 3.0, 5.0).finished();
  sep.k = (Vector(2) << 1.0, 1.0).finished();
  GameSpec game = sep.to_game_spec();

  TwoTimescaleConfig cfg;
  cfg.outer_iters = 200;
  const Trajectory traj = run_pricing_loop(
      game, (Vector(2) << 1.0, 2.0).finished(), cfg, true);

  // independent per-player calculus: max of beta log(1+x) - k x at beta/k - 1
  const Vector x_hat =
      (Vector(2) << 3.0 / 1.0 - 1.0, 5.0 / 1.0 - 1.0).finished();
  CHECK((traj.x.back() - x_hat).lpNorm<Eigen::Infinity>() < 1e-5);
  CHECK(traj.alpha.back().lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("run_pricing_loop: wireless settled mode only descends") {
  std::mt19937_64 rng(11);
  const WirelessSirGame wg = testing::random_wireless(rng, 2);
  GameSpec game = wg.to_game_spec();
  TwoTimescaleConfig cfg;
  cfg.outer_iters = 30;
  const Trajectory traj = run_pricing_loop(
      game, (Vector(2) << 4.0, 5.0).finished(), cfg, true);
  const LyapunovReport monitor =
      lyapunov_monitor(traj, game, LyapunovKind::WelfareSettled);
  CHECK(monitor.max_increment <= 1e-8 * std::abs(monitor.v.front()));
}

TEST_CASE("run_pricing_loop: two-timescale gap shrinks with epsilon") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector alpha0 = (Vector(2) << 18.35, 19.23).finished();
  const Vector x0 = Vector::Constant(2, 4.3e-4);

  // fixed-step runs so both modes follow the same price update rule
  auto run_cfg = [&](double eps, bool settled) {
    TwoTimescaleConfig cfg = TwoTimescaleConfig::with_epsilon(eps);
    cfg.dt_fast = 1e-5;
    cfg.outer_iters = 50;
    cfg.adapt_step = false;
    cfg.outer_step = 200.0;
    return run_pricing_loop(game, alpha0, cfg, settled, settled ? nullptr : &x0);
  };
  const Trajectory settled = run_cfg(0.01, true);

  std::vector<double> gaps;
  for (double eps : {0.1, 0.03, 0.01}) {
    const Trajectory full = run_cfg(eps, false);
    Vector diff(4);
    diff << full.x.back() - settled.x.back(),
        full.alpha.back() - settled.alpha.back();
    gaps.push_back(diff.norm());
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);
}

TEST_CASE("penalty_price_rhs: inactive inside the QoS region") {
  WirelessSirGame game;
  game.h = (Vector(2) << 1.0, 0.8).finished();
  game.sigma2 = 0.1;
  game.L = 5.0;
  game.beta = Vector::Constant(2, 2.0);
  PenaltySpec spec;
  spec.s_bar = (Vector(2) << 1.2, 1.0).finished();

  // low prices give generous power and high SIR
  const PenaltyEval eval =
      penalty_price_rhs(game, Vector::Constant(2, 8.0), spec);
  CHECK(eval.penalty_sum == 0.0);
  CHECK(eval.alpha_dot.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("penalty_price_rhs: single violating user lowers its price") {
  WirelessSirGame game;
  game.h = Vector::Ones(1);
  game.sigma2 = 1.0;
  game.L = 1.0;
  game.beta = Vector::Constant(1, 2.0);
  PenaltySpec spec;
  spec.s_bar = Vector::Constant(1, 1.0);

  // x* = 2/alpha - 1; alpha = 1.8 gives x* = 1/9 and SIR 1/9 < 1
  const PenaltyEval eval =
      penalty_price_rhs(game, Vector::Constant(1, 1.8), spec);
  CHECK(eval.penalty_sum > 0.0);
  CHECK(eval.alpha_dot[0] < 0.0);
}

TEST_CASE("run_penalty_loop: infeasible start reaches the QoS region") {
  WirelessSirGame game;
  game.h = (Vector(2) << 1.0, 0.8).finished();
  game.sigma2 = 0.1;
  game.L = 5.0;
  game.beta = Vector::Constant(2, 2.0);
  PenaltySpec spec;
  spec.s_bar = (Vector(2) << 1.2, 1.0).finished();

  const Vector alpha0 = Vector::Constant(2, 60.0);
  {
    // confirm the start violates the targets
    const Vector x0 = wireless_ne(game, alpha0);
    CHECK(sir(x0, game, 0) < spec.s_bar[0]);
    CHECK(sir(x0, game, 1) < spec.s_bar[1]);
  }

  const Trajectory traj = run_penalty_loop(game, alpha0, spec, 200);
  const Vector x = traj.x.back();
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    min_margin = std::min(min_margin, sir(x, game, i) - spec.s_bar[i]);
  }
  CHECK(min_margin >= -1e-6);

  // the penalty potential never increases along the loop
  const LyapunovReport monitor =
      lyapunov_monitor(traj, game.to_game_spec(), LyapunovKind::Penalty,
                       &spec, &game);
  CHECK(monitor.max_increment <= 1e-12);
}

TEST_CASE("lyapunov_monitor: stationary trajectory has constant potential") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x_hat = sec6_social_max(game);
  const Vector alpha_hat = design_price(game, x_hat).alpha;
  TwoTimescaleConfig cfg = sec6_config();
  cfg.outer_iters = 5;
  const Trajectory traj = run_pricing_loop(game, alpha_hat, cfg, true);
  const LyapunovReport monitor =
      lyapunov_monitor(traj, game, LyapunovKind::WelfareSettled);
  CHECK(monitor.max_increment < 1e-10);
}

TEST_CASE("lyapunov_monitor: flags increments on an unsafeguarded run") {
  // oversized fixed price steps oscillate; the monitor must report rises
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  TwoTimescaleConfig cfg = sec6_config();
  cfg.adapt_step = false;
  cfg.outer_step = 2e5;
  cfg.outer_iters = 40;
  const Trajectory traj = run_pricing_loop(
      game, (Vector(2) << 18.35, 19.23).finished(), cfg, true);
  const LyapunovReport monitor =
      lyapunov_monitor(traj, game, LyapunovKind::WelfareSettled);
  CHECK(monitor.max_increment > 1e-6);
}

TEST_CASE("lyapunov_monitor: full mode reports the boundary-layer series") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x0 = Vector::Constant(2, 4.3e-4);
  TwoTimescaleConfig cfg = sec6_config();
  cfg.outer_iters = 10;
  const Trajectory traj = run_pricing_loop(
      game, (Vector(2) << 18.35, 19.23).finished(), cfg, false, &x0);
  const LyapunovReport monitor =
      lyapunov_monitor(traj, game, LyapunovKind::WelfareFull);
  CHECK(monitor.boundary_layer.size() == traj.rows());
  for (double w : monitor.boundary_layer) CHECK(w >= 0.0);
}

TEST_CASE("price clamping is counted by the loop") {
  // start at a price the dynamics immediately push negative
  SeparableLogGame sep;
  sep.beta = Vector::Constant(1, 3.0);
  sep.k = Vector::Constant(1, 1.0);
  GameSpec game = sep.to_game_spec();
  TwoTimescaleConfig cfg;
  cfg.outer_iters = 100;
  const Trajectory traj =
      run_pricing_loop(game, Vector::Constant(1, 0.05), cfg, true);
  // the separable optimum sits at alpha = 0, reached from above via clamps
  CHECK(traj.alpha.back()[0] < 1e-4);
}

TEST_CASE("price_ode_rhs: fixed points coincide with welfare stationarity") {
  // both directions, on the optical and separable games
  {
    const OpticalOsnrGame link = testing::sec6_game();
    GameSpec game = link.to_game_spec();
    const Vector x_hat = sec6_social_max(game);
    const Vector alpha_hat = design_price(game, x_hat).alpha;

    // stationary prices imply a welfare-stationary equilibrium
    const PriceOdeEval at_opt = price_ode_rhs(game, alpha_hat);
    CHECK(at_opt.alpha_dot.lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK(welfare_gradient(game, at_opt.x_star).lpNorm<Eigen::Infinity>() <
          1e-6);

    // a non-stationary welfare gradient forces price motion
    const Vector alpha_off = (Vector(2) << 30.0, 35.0).finished();
    const PriceOdeEval off = price_ode_rhs(game, alpha_off);
    REQUIRE(welfare_gradient(game, off.x_star).lpNorm<Eigen::Infinity>() >
            1e-3);
    CHECK(off.alpha_dot.lpNorm<Eigen::Infinity>() > 1e-8);
  }
  {
    SeparableLogGame sep;
    sep.beta = (Vector(2) << 3.0, 5.0).finished();
    sep.k = Vector::Ones(2);
    GameSpec game = sep.to_game_spec();
    // the zero-price equilibrium is the welfare optimum for this family
    const Vector alpha_hat = Vector::Zero(2);
    const PriceOdeEval at_opt = price_ode_rhs(game, alpha_hat);
    CHECK(at_opt.alpha_dot.lpNorm<Eigen::Infinity>() < 1e-12);

    const Vector alpha_off = (Vector(2) << 0.8, 1.2).finished();
    const PriceOdeEval off = price_ode_rhs(game, alpha_off);
    CHECK(off.alpha_dot.lpNorm<Eigen::Infinity>() > 1e-3);
  }
}

TEST_CASE("run_pricing_loop: long converged runs keep finite steps and times") {
  SeparableLogGame sep;
  sep.beta = Vector::Constant(1, 3.0);
  sep.k = Vector::Constant(1, 1.0);
  GameSpec game = sep.to_game_spec();
  TwoTimescaleConfig cfg;
  cfg.outer_iters = 2000;  // converges around iteration 30; keep doubling
  const Trajectory traj =
      run_pricing_loop(game, Vector::Constant(1, 1.0), cfg, true);
  traj.check_invariants();
  CHECK(std::isfinite(traj.t.back()));
  CHECK(traj.alpha.back().allFinite());
  CHECK(traj.alpha.back()[0] < 1e-8);
}
