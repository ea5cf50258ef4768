#include "gamedesign/control.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "gamedesign/errors.hpp"
#include "gamedesign/pricing.hpp"

namespace gamedesign {

namespace {

constexpr double kDivergenceNorm = 1e12;

void check_state(const Vector& x, double t) {
  if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > kDivergenceNorm) {
    throw DivergenceError("state diverged at t = " + std::to_string(t));
  }
}

}  // namespace

Trajectory game_flow(const GameSpec& game, const PriceSource& alpha,
                     const ActionVector& x0, double dt, double T,
                     Integrator integrator, int record_every) {
  require_size(x0, game.n_players, "x0");
  if (dt <= 0.0) throw DomainError("game_flow: dt > 0 required");
  if (record_every < 1) record_every = 1;

  auto rhs = [&](double t, const Vector& x) -> Vector {
    return -pseudo_gradient(game, alpha(t, x), x);
  };

  Trajectory traj;
  traj.n_players = game.n_players;
  traj.metric_kind = metric_kind_for(game);

  Vector x = x0;
  const long steps = static_cast<long>(std::ceil(T / dt));
  auto record = [&](double t) {
    traj.push(t, x, alpha(t, x), welfare(game, x), -welfare(game, x),
              metrics_db(game, x));
  };
  record(0.0);
  for (long k = 0; k < steps; ++k) {
    const double t = k * dt;
    if (integrator == Integrator::Euler) {
      x += dt * rhs(t, x);
    } else {
      const Vector k1 = rhs(t, x);
      const Vector k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
      const Vector k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
      const Vector k4 = rhs(t + dt, x + dt * k3);
      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    check_state(x, t + dt);
    if ((k + 1) % record_every == 0 || k + 1 == steps) record((k + 1) * dt);
  }
  return traj;
}

PriceVector steady_state_price(const GameSpec& game,
                               const ActionVector& x_hat) {
  require_size(x_hat, game.n_players, "x_hat");
  const Vector f = utility_gradient_own(game, x_hat);
  const Vector g = control_channel_diagonal(game, x_hat);
  PriceVector c(game.n_players);
  for (int i = 0; i < game.n_players; ++i) {
    if (std::abs(g[i]) < 1e-14) {
      throw SingularMatrixError(
          "steady_state_price: G(x_hat) singular at channel " +
          std::to_string(i));
    }
    c[i] = -f[i] / g[i];
  }
  return c;
}

void ControllerSpec::validate(int n_players) const {
  require_size(target, n_players, "target");
  require_size(lambda1, n_players, "lambda1");
  if ((lambda1.array() <= 0.0).any()) {
    throw DomainError("ControllerSpec: lambda1 entries must be positive");
  }
  if (mode == Mode::IntegralAugmented) {
    require_size(lambda2, n_players, "lambda2");
    if ((lambda2.array() <= 0.0).any()) {
      throw DomainError("ControllerSpec: lambda2 entries must be positive");
    }
  }
}

LinearizedPlant linearize_plant(const GameSpec& game,
                                const ActionVector& x_hat) {
  const int n = game.n_players;
  LinearizedPlant plant;
  plant.A = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      plant.A(i, j) = game.utility->own_second(i, j, x_hat);
    }
  }
  plant.B = Matrix(control_channel_diagonal(game, x_hat).asDiagonal());
  return plant;
}

RegulationGains regulation_gain(const LinearizedPlant& plant,
                                const ControllerSpec& spec) {
  const int n = static_cast<int>(plant.A.rows());
  Eigen::FullPivLU<Matrix> lu(plant.B);
  if (!lu.isInvertible()) {
    throw SingularMatrixError("regulation_gain: B singular");
  }

  RegulationGains gains;
  const Matrix lambda1 = Matrix(spec.lambda1.asDiagonal());
  gains.K = lu.solve(-lambda1 - plant.A);

  if (spec.mode == ControllerSpec::Mode::SteadyStatePlusGain) {
    gains.closed_loop = plant.A + plant.B * gains.K;
  } else {
    gains.Ki = lu.solve(Matrix(Vector(-spec.lambda2).asDiagonal()));
    gains.closed_loop = Matrix::Zero(2 * n, 2 * n);
    gains.closed_loop.topLeftCorner(n, n) = plant.A + plant.B * gains.K;
    gains.closed_loop.topRightCorner(n, n) = plant.B * gains.Ki;
    gains.closed_loop.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  }

  const Eigen::EigenSolver<Matrix> eig(gains.closed_loop);
  gains.max_real_eigenvalue = eig.eigenvalues().real().maxCoeff();
  if (gains.max_real_eigenvalue >= 0.0) {
    throw DesignError("regulation_gain: closed loop not stable, max Re = " +
                      std::to_string(gains.max_real_eigenvalue));
  }
  return gains;
}

RegulationResult regulate(const GameSpec& game, const ControllerSpec& spec,
                          const ActionVector& x0, double dt, double T,
                          const Vector& disturbance, int record_every) {
  spec.validate(game.n_players);
  require_size(x0, game.n_players, "x0");
  if (dt <= 0.0) throw DomainError("regulate: dt > 0 required");
  if (record_every < 1) record_every = 1;
  const int n = game.n_players;

  RegulationResult result;
  result.steady_price = steady_state_price(game, spec.target);
  result.gains = regulation_gain(linearize_plant(game, spec.target), spec);

  Vector d = disturbance;
  if (d.size() == 0) d = Vector::Zero(n);
  require_size(d, n, "disturbance");

  const bool integral = spec.mode == ControllerSpec::Mode::IntegralAugmented;
  Vector x = x0;
  Vector sigma = Vector::Zero(n);

  auto price_law = [&](const Vector& state, const Vector& integ) {
    PriceVector a = result.steady_price + result.gains.K * (state - spec.target);
    if (integral) a += result.gains.Ki * integ;
    return a;
  };

  Trajectory traj;
  traj.n_players = n;
  traj.metric_kind = metric_kind_for(game);
  auto record = [&](double t, const Vector& a) {
    traj.push(t, x, a, welfare(game, x), -welfare(game, x),
              metrics_db(game, x));
  };
  record(0.0, price_law(x, sigma));

  const long steps = static_cast<long>(std::ceil(T / dt));
  for (long k = 0; k < steps; ++k) {
    const PriceVector a = price_law(x, sigma);
    const Vector xdot = -pseudo_gradient(game, a, x) + d;
    if (integral) sigma += dt * (x - spec.target);
    x += dt * xdot;
    check_state(x, (k + 1) * dt);
    if ((k + 1) % record_every == 0 || k + 1 == steps) {
      record((k + 1) * dt, price_law(x, sigma));
    }
  }

  result.final_error = (x - spec.target).norm();
  result.trajectory = std::move(traj);
  return result;
}

namespace {

using VectorField = std::function<Vector(const Vector&)>;

Matrix fd_jacobian(const VectorField& field, const Vector& x) {
  const int n = static_cast<int>(x.size());
  const double step = 1e-4 * (1.0 + x.lpNorm<Eigen::Infinity>());
  Matrix J(n, n);
  for (int j = 0; j < n; ++j) {
    Vector xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    J.col(j) = (field(xp) - field(xm)) / (2.0 * step);
  }
  return J;
}

VectorField lie_bracket(const VectorField& f, const VectorField& g) {
  return [f, g](const Vector& x) -> Vector {
    return fd_jacobian(g, x) * f(x) - fd_jacobian(f, x) * g(x);
  };
}

}  // namespace

ReachabilityReport reachability_rank(const GameSpec& game,
                                     const PriceVector& alpha0,
                                     const ActionVector& x0, int depth) {
  require_size(x0, game.n_players, "x0");
  require_size(alpha0, game.n_players, "alpha0");
  if (depth < 0 || depth > 2) {
    throw DomainError("reachability_rank: depth must be 0, 1 or 2");
  }
  const int n = game.n_players;

  // Drift at the operating prices; alpha0 = 0 recovers the bare f.
  VectorField drift = [&game, alpha0](const Vector& x) -> Vector {
    return -pseudo_gradient(game, alpha0, x);
  };
  std::vector<VectorField> controls;
  for (int i = 0; i < n; ++i) {
    controls.push_back([&game, i, n](const Vector& x) -> Vector {
      Vector g = Vector::Zero(n);
      g[i] = -game.pricing->own_partial(i, x);
      return g;
    });
  }

  std::vector<Vector> columns;
  for (const auto& g : controls) columns.push_back(g(x0));
  if (depth >= 1) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        columns.push_back(lie_bracket(controls[i], controls[j])(x0));
      }
    }
    for (const auto& g : controls) {
      columns.push_back(lie_bracket(drift, g)(x0));
    }
  }
  if (depth >= 2) {
    for (const auto& g : controls) {
      columns.push_back(lie_bracket(drift, lie_bracket(drift, g))(x0));
    }
  }

  Matrix D(n, static_cast<int>(columns.size()));
  for (int c = 0; c < D.cols(); ++c) D.col(c) = columns[c];

  Eigen::JacobiSVD<Matrix> svd(D);
  const Vector sv = svd.singularValues();
  const double threshold = 1e-8 * sv.maxCoeff();

  ReachabilityReport report;
  report.columns = static_cast<int>(columns.size());
  for (int i = 0; i < sv.size(); ++i) {
    report.singular_values.push_back(sv[i]);
    if (sv[i] > threshold) ++report.rank;
  }
  if (report.rank > 0 && report.rank < sv.size()) {
    const double kept = sv[report.rank - 1];
    const double dropped = sv[report.rank];
    report.conditioning_warning = dropped > 0.0 && kept / dropped < 10.0;
  }
  return report;
}

}  // namespace gamedesign
