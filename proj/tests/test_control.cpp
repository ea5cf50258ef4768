#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "gamedesign/control.hpp"
#include "gamedesign/design.hpp"
#include "gamedesign/pricing.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gamedesign;

namespace {

GameSpec quadratic_game(int n) {
  return make_game(
      n, std::make_shared<QuadraticUtility>(n),
      std::make_shared<LinearOwnPricing>(),
      ConstraintSet::box(Vector::Constant(n, -10.0), Vector::Constant(n, 10.0)));
}

}  // namespace

TEST_CASE("game_flow: free quadratic game decays exponentially") {
  GameSpec game = quadratic_game(2);
  const Vector x0 = (Vector(2) << 1.0, -2.0).finished();
  const double dt = 1e-4, T = 1.0;
  const Trajectory traj =
      game_flow(game, constant_price(Vector::Zero(2)), x0, dt, T,
                Integrator::Euler, 100);
  const Vector expected = x0 * std::exp(-2.0 * T);
  CHECK((traj.x.back() - expected).lpNorm<Eigen::Infinity>() < 1e-3);
}

TEST_CASE("game_flow: converges to the designed equilibrium") {
  SeparableLogGame sep;
  sep.beta = (Vector(2) << 3.0, 5.0).finished();
  sep.k = Vector::Ones(2);
  GameSpec game = sep.to_game_spec();
  const Vector target = (Vector(2) << 0.5, 1.2).finished();
  const DesignResult d = design_price(game, target);
  REQUIRE(d.feasible);

  const Trajectory traj = game_flow(game, constant_price(d.alpha),
                                    Vector::Constant(2, 0.1), 1e-3, 30.0,
                                    Integrator::Euler, 1000);
  CHECK((traj.x.back() - target).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("game_flow: optical link converges to the design target") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const auto social = oracle::brute_welfare_max(game, [&] {
    Box b = game.box();
    b.lower = Vector::Constant(2, 1e-4);
    return b;
  }());
  REQUIRE(social.converged);
  const DesignResult d = design_price(game, social.value);
  REQUIRE(d.feasible);

  const Trajectory traj = game_flow(game, constant_price(d.alpha),
                                    Vector::Constant(2, 4.3e-4), 1e-6, 0.02,
                                    Integrator::Euler, 1000);
  CHECK((traj.x.back() - social.value).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("game_flow: RK4 shows fourth-order step dependence") {
  GameSpec game = quadratic_game(1);
  const Vector x0 = Vector::Constant(1, 1.0);
  const double T = 1.0;
  auto terminal = [&](double dt) {
    return game_flow(game, constant_price(Vector::Zero(1)), x0, dt, T,
                     Integrator::RK4, 1 << 20).x.back()[0];
  };
  const double exact = std::exp(-2.0 * T);
  const double err1 = std::abs(terminal(0.02) - exact);
  const double err2 = std::abs(terminal(0.01) - exact);
  const double ratio = err1 / err2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("game_flow: divergence raises") {
  // unstable drift: U = +x^2 so the flow is xdot = +2x
  auto utility = std::make_shared<OpaqueUtility>(
      1, [](int, const Vector& x) { return x[0] * x[0]; });
  auto game = make_game(1, utility, std::make_shared<LinearOwnPricing>(),
                        ConstraintSet::box(Vector::Constant(1, -1e30),
                                           Vector::Constant(1, 1e30)));
  CHECK_THROWS_AS(game_flow(game, constant_price(Vector::Zero(1)),
                            Vector::Ones(1), 0.5, 200.0),
                  DivergenceError);
}

TEST_CASE("steady_state_price: identity reduction for linear pricing") {
  SeparableLogGame sep;
  sep.beta = (Vector(2) << 3.0, 4.0).finished();
  sep.k = Vector::Ones(2);
  GameSpec game = sep.to_game_spec();
  const Vector x_hat = (Vector(2) << 0.5, 0.8).finished();
  const Vector c = steady_state_price(game, x_hat);
  const Vector f = utility_gradient_own(game, x_hat);
  CHECK((c - f).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("steady_state_price: published optical prices within one percent") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector c = steady_state_price(game, testing::sec6_published_x());
  const Vector published = testing::sec6_published_alpha();
  CHECK(((c - published).cwiseQuotient(published)).lpNorm<Eigen::Infinity>() <
        0.01);
}

TEST_CASE("steady_state_price: coincides with the static design formula") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    const OpticalOsnrGame og = testing::random_osnr(rng, 2);
    GameSpec game = og.to_game_spec();
    const Vector target = testing::random_vector(rng, 2, 0.005, 0.05);
    const Vector c = steady_state_price(game, target);
    const DesignResult d = design_price(game, target);
    CHECK((c - d.alpha).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("regulation_gain: scalar arithmetic") {
  LinearizedPlant plant;
  plant.A = Matrix::Constant(1, 1, 2.0);
  plant.B = Matrix::Constant(1, 1, -1.0);
  ControllerSpec spec;
  spec.mode = ControllerSpec::Mode::SteadyStatePlusGain;
  spec.lambda1 = Vector::Constant(1, 3.0);
  spec.target = Vector::Zero(1);

  const RegulationGains gains = regulation_gain(plant, spec);
  CHECK(gains.K(0, 0) == doctest::Approx(5.0));
  CHECK(gains.closed_loop(0, 0) == doctest::Approx(-3.0));
}

TEST_CASE("regulation_gain: exact pole placement on the optical plant") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const LinearizedPlant plant = linearize_plant(game, testing::sec6_published_x());

  // the plant's B is -I for linear pricing
  CHECK((plant.B + Matrix::Identity(2, 2)).norm() < 1e-14);

  ControllerSpec spec;
  spec.mode = ControllerSpec::Mode::SteadyStatePlusGain;
  spec.lambda1 = Vector::Constant(2, 5.0);
  spec.target = testing::sec6_published_x();
  const RegulationGains gains = regulation_gain(plant, spec);

  const Eigen::EigenSolver<Matrix> eig(gains.closed_loop);
  Vector reals = eig.eigenvalues().real();
  std::sort(reals.data(), reals.data() + reals.size());
  CHECK(reals[0] == doctest::Approx(-5.0).epsilon(1e-10));
  CHECK(reals[1] == doctest::Approx(-5.0).epsilon(1e-10));
  CHECK(eig.eigenvalues().imag().lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK(gains.max_real_eigenvalue == doctest::Approx(-5.0).epsilon(1e-10));
}

TEST_CASE("regulation_gain: integral augmentation is stable") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const LinearizedPlant plant = linearize_plant(game, testing::sec6_published_x());

  ControllerSpec spec;
  spec.mode = ControllerSpec::Mode::IntegralAugmented;
  spec.lambda1 = Vector::Constant(2, 1.0);
  spec.lambda2 = Vector::Constant(2, 1.0);
  spec.target = testing::sec6_published_x();
  const RegulationGains gains = regulation_gain(plant, spec);
  CHECK(gains.closed_loop.rows() == 4);
  CHECK(gains.max_real_eigenvalue < 0.0);
}

TEST_CASE("regulation_gain: singular control channel is rejected") {
  LinearizedPlant plant;
  plant.A = Matrix::Constant(1, 1, 2.0);
  plant.B = Matrix::Zero(1, 1);
  ControllerSpec spec;
  spec.lambda1 = Vector::Constant(1, 3.0);
  spec.target = Vector::Zero(1);
  CHECK_THROWS_AS(regulation_gain(plant, spec), SingularMatrixError);
}

TEST_CASE("regulate: equilibrium start stays put") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x_hat = osnr_ne(link, testing::sec6_published_alpha());
  ControllerSpec spec;
  spec.mode = ControllerSpec::Mode::SteadyStatePlusGain;
  spec.lambda1 = Vector::Constant(2, 5.0);
  spec.target = x_hat;
  const RegulationResult r = regulate(game, spec, x_hat, 1e-3, 1.0);
  CHECK(r.final_error < 1e-12);
}

TEST_CASE("regulate: converges inside the linearization basin") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x_hat = testing::sec6_published_x();
  ControllerSpec spec;
  spec.mode = ControllerSpec::Mode::SteadyStatePlusGain;
  spec.lambda1 = Vector::Constant(2, 5.0);
  spec.target = x_hat;

  // probe the basin by halving the start offset until the run converges
  Vector offset = 0.1 * x_hat;
  double err_T = std::numeric_limits<double>::infinity();
  for (int halving = 0; halving < 30; ++halving) {
    try {
      const RegulationResult r = regulate(game, spec, x_hat + offset, 1e-3, 10.0);
      err_T = r.final_error;
      if (err_T < 1e-6) break;
    } catch (const DivergenceError&) {
    }
    offset *= 0.5;
  }
  CHECK(err_T < 1e-6);

  // longer runs do not lose the target
  const double err_2T =
      regulate(game, spec, x_hat + offset, 1e-3, 20.0).final_error;
  CHECK(err_2T <= err_T + 1e-12);
}

TEST_CASE("regulate: integral action rejects a constant disturbance") {
  const OpticalOsnrGame link = testing::sec6_game();
  GameSpec game = link.to_game_spec();
  const Vector x_hat = testing::sec6_published_x();
  const Vector f_hat = utility_gradient_own(game, x_hat);
  const Vector disturbance = Vector::Constant(2, 0.1 * f_hat.norm());

  // gains matched to the plant's stiffness so the transient stays in the
  // linearization basin
  ControllerSpec spec;
  spec.mode = ControllerSpec::Mode::IntegralAugmented;
  spec.lambda1 = Vector::Constant(2, 12000.0);
  spec.lambda2 = Vector::Constant(2, 2e7);
  spec.target = x_hat;

  const RegulationResult integral =
      regulate(game, spec, x_hat, 2e-5, 0.05, disturbance);
  CHECK(integral.final_error < 1e-8);

  // proportional-only keeps a bias under the same disturbance
  ControllerSpec prop = spec;
  prop.mode = ControllerSpec::Mode::SteadyStatePlusGain;
  const RegulationResult biased =
      regulate(game, prop, x_hat, 2e-5, 0.05, disturbance);
  CHECK(biased.final_error > 1e-6);
}

TEST_CASE("reachability_rank: linear pricing has full rank immediately") {
  SeparableLogGame sep;
  sep.beta = (Vector(3) << 3.0, 4.0, 5.0).finished();
  sep.k = Vector::Ones(3);
  GameSpec game = sep.to_game_spec();
  const auto report = reachability_rank(game, Vector::Zero(3),
                                        Vector::Constant(3, 1.0), 0);
  CHECK(report.rank == 3);
  CHECK(report.columns == 3);
}

TEST_CASE("reachability_rank: quadratic pricing needs brackets at the origin") {
  SeparableLogGame sep;
  sep.beta = Vector::Constant(2, 3.0);
  sep.k = Vector::Constant(2, 1.0);
  sep.x_min = -0.5;
  GameSpec game = sep.to_game_spec();
  // switch to own-quadratic pricing: dp/dx = x vanishes at the origin
  game.pricing = std::make_shared<QuadraticOwnPricing>(0.5);

  const auto at_origin =
      reachability_rank(game, Vector::Zero(2), Vector::Zero(2), 0);
  CHECK(at_origin.rank == 0);

  // the drift df/dx(0) = beta - k = 2 is nonzero, so [f, g_i] restores rank
  const auto depth1 =
      reachability_rank(game, Vector::Zero(2), Vector::Zero(2), 1);
  CHECK(depth1.rank == 2);
}

TEST_CASE("reachability_rank: exponential pricing at a generic point") {
  SeparableLogGame sep;
  sep.beta = Vector::Constant(2, 3.0);
  sep.k = Vector::Constant(2, 1.0);
  sep.pricing_kind = SeparableLogGame::Pricing::ExpSum;
  GameSpec game = sep.to_game_spec();
  const auto report = reachability_rank(game, Vector::Zero(2),
                                        Vector::Constant(2, 0.7), 0);
  CHECK(report.rank == 2);
}

TEST_CASE("reachability_rank: depth 2 accepts and reports columns") {
  SeparableLogGame sep;
  sep.beta = Vector::Constant(2, 3.0);
  sep.k = Vector::Constant(2, 1.0);
  GameSpec game = sep.to_game_spec();
  const auto report = reachability_rank(game, Vector::Ones(2),
                                        Vector::Constant(2, 0.5), 2);
  CHECK(report.columns == 2 + 1 + 2 + 2);  // g, [g,g], [f,g], ad^2
  CHECK(report.rank == 2);
  CHECK_THROWS_AS(reachability_rank(game, Vector::Ones(2),
                                    Vector::Constant(2, 0.5), 3),
                  DomainError);
}
