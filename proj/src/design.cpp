#include "gamedesign/design.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gamedesign/errors.hpp"

namespace gamedesign {

namespace {
constexpr double kZeroSensitivityTol = 1e-12;
}

DesignResult design_price(const GameSpec& game, const ActionVector& x_hat) {
  require_size(x_hat, game.n_players, "x_hat");
  require_finite(x_hat, "x_hat");
  if (!game.box().strictly_contains(x_hat) ||
      !game.constraints.feasible(x_hat)) {
    throw InfeasibleTargetError(
        "design_price: target outside the interior of Omega");
  }

  const int n = game.n_players;
  DesignResult result;
  result.alpha = Vector::Zero(n);
  result.per_player_sensitivity = Vector(n);
  result.feasible = true;

  for (int i = 0; i < n; ++i) {
    const double sens = game.pricing->own_partial(i, x_hat);
    result.per_player_sensitivity[i] = sens;
    if (std::abs(sens) <= kZeroSensitivityTol) {
      result.feasible = false;
      result.notes.push_back("zero pricing sensitivity for player " +
                             std::to_string(i));
      continue;
    }
    const double a = game.utility->partial(i, i, x_hat) / sens;
    result.alpha[i] = a;
    if (a < 0.0) {
      result.feasible = false;
      result.notes.push_back("negative price " + std::to_string(a) +
                             " required for player " + std::to_string(i));
    }
  }
  return result;
}

DesignResult wireless_qos_boundary_price(const WirelessSirGame& game) {
  game.validate();
  if (game.s_bar.size() == 0) {
    throw DomainError("wireless_qos_boundary_price: s_bar required");
  }
  const int n = game.players();

  const Matrix S = game.qos_matrix();
  Eigen::FullPivLU<Matrix> lu(S);
  if (!lu.isInvertible()) {
    throw SingularMatrixError("wireless_qos_boundary_price: S singular");
  }
  const Vector x = lu.solve(game.qos_offset());
  if ((x.array() < 0.0).any()) {
    throw InfeasibleTargetError(
        "wireless_qos_boundary_price: boundary point has negative power");
  }

  const Vector c = game.system_matrix() * x;
  DesignResult result;
  result.alpha = Vector(n);
  result.per_player_sensitivity = Vector::Ones(n);  // linear pricing
  result.feasible = true;
  for (int i = 0; i < n; ++i) {
    const double denom = c[i] + game.sigma2 / (game.L * game.h[i]);
    if (denom <= 0.0) {
      throw InfeasibleTargetError(
          "wireless_qos_boundary_price: nonpositive beta_i/alpha_i for player " +
          std::to_string(i));
    }
    result.alpha[i] = game.beta[i] / denom;
  }

  // Mandatory verification: re-solve and compare achieved SIRs. Catches a
  // near-singular S producing garbage silently.
  const ActionVector x_check = wireless_ne(game, result.alpha);
  for (int i = 0; i < n; ++i) {
    const double achieved = sir(x_check, game, i);
    if (std::abs(achieved - game.s_bar[i]) >
        1e-6 * (1.0 + std::abs(game.s_bar[i]))) {
      throw DesignError(
          "wireless_qos_boundary_price: verification failed, SIR " +
          std::to_string(achieved) + " vs target " +
          std::to_string(game.s_bar[i]) + " for player " + std::to_string(i));
    }
  }
  return result;
}

}  // namespace gamedesign
