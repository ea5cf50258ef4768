#include "gamedesign/game.hpp"

#include <cmath>

#include "gamedesign/errors.hpp"

namespace gamedesign {

Matrix NeMap::jacobian(const PriceVector&) const {
  throw GameError("NeMap: analytic jacobian not available");
}

GameSpec make_game(int n_players, std::shared_ptr<const UtilityFamily> utility,
                   std::shared_ptr<const PricingFamily> pricing,
                   ConstraintSet constraints) {
  if (!utility || !pricing) {
    throw GameError("make_game: utility and pricing families required");
  }
  if (utility->players() != n_players) {
    throw DimensionError("make_game: utility family has " +
                         std::to_string(utility->players()) +
                         " players, expected " + std::to_string(n_players));
  }
  if (constraints.box_hull().dim() != n_players) {
    throw DimensionError("make_game: box hull dimension mismatch");
  }
  GameSpec game;
  game.n_players = n_players;
  game.utility = std::move(utility);
  game.pricing = std::move(pricing);
  game.constraints = std::move(constraints);
  return game;
}

double cost(const GameSpec& game, const PriceVector& alpha,
            const ActionVector& x, int i) {
  require_size(x, game.n_players, "x");
  require_size(alpha, game.n_players, "alpha");
  require_finite(x, "x");
  require_finite(alpha, "alpha");
  if (i < 0 || i >= game.n_players) {
    throw DimensionError("cost: player index out of range");
  }
  return alpha[i] * game.pricing->value(i, x) - game.utility->value(i, x);
}

Vector pseudo_gradient(const GameSpec& game, const PriceVector& alpha,
                       const ActionVector& x) {
  require_size(x, game.n_players, "x");
  require_size(alpha, game.n_players, "alpha");
  Vector q(game.n_players);
  for (int i = 0; i < game.n_players; ++i) {
    q[i] = alpha[i] * game.pricing->own_partial(i, x) -
           game.utility->partial(i, i, x);
  }
  if (!q.allFinite()) {
    throw NumericsError("pseudo_gradient: non-finite partial derivative");
  }
  return q;
}

Matrix jacobian_Q(const GameSpec& game, const PriceVector& alpha,
                  const ActionVector& x, const DiffSettings& settings) {
  const int n = game.n_players;
  Matrix Q(n, n);
  if (game.utility->has_analytic_second()) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Q(i, j) = alpha[i] * game.pricing->own_second(i, j, x) -
                  game.utility->own_second(i, j, x);
      }
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const double h = settings.step_for(x[j]);
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      Vector col;
      if (settings.scheme == DiffSettings::Scheme::Forward) {
        col = (pseudo_gradient(game, alpha, xp) -
               pseudo_gradient(game, alpha, x)) / h;
      } else {
        col = (pseudo_gradient(game, alpha, xp) -
               pseudo_gradient(game, alpha, xm)) / (2.0 * h);
      }
      Q.col(j) = col;
    }
  }
  if (!Q.allFinite()) {
    throw NumericsError("jacobian_Q: non-finite entry (finite differences "
                        "may have stepped outside the box hull)");
  }
  return Q;
}

double kkt_residual(const GameSpec& game, const PriceVector& alpha,
                    const ActionVector& x,
                    const std::vector<Vector>& multipliers) {
  const int n = game.n_players;
  const auto& hs = game.constraints.constraints();
  const int r = static_cast<int>(hs.size());
  if (static_cast<int>(multipliers.size()) != n) {
    throw DimensionError("kkt_residual: one multiplier vector per player");
  }
  for (const auto& phi : multipliers) {
    require_size(phi, r, "multipliers");
    if ((phi.array() < 0.0).any()) {
      throw DomainError("kkt_residual: multipliers must be nonnegative");
    }
  }

  const Vector q = pseudo_gradient(game, alpha, x);
  std::vector<double> h_values(r);
  std::vector<Vector> h_grads(r);
  for (int j = 0; j < r; ++j) {
    h_values[j] = hs[j].value(x);
    h_grads[j] = hs[j].gradient(x);
  }

  double stationarity = 0.0;
  double slackness = 0.0;
  for (int i = 0; i < n; ++i) {
    double lag = q[i];
    for (int j = 0; j < r; ++j) {
      lag += multipliers[i][j] * h_grads[j][i];
      slackness = std::max(slackness,
                           std::abs(multipliers[i][j] * h_values[j]));
    }
    stationarity = std::max(stationarity, std::abs(lag));
  }
  return stationarity + slackness;
}

Vector utility_gradient_own(const GameSpec& game, const ActionVector& x) {
  Vector f(game.n_players);
  for (int i = 0; i < game.n_players; ++i) {
    f[i] = game.utility->partial(i, i, x);
  }
  return f;
}

Vector control_channel_diagonal(const GameSpec& game, const ActionVector& x) {
  Vector g(game.n_players);
  for (int i = 0; i < game.n_players; ++i) {
    g[i] = -game.pricing->own_partial(i, x);
  }
  return g;
}

}  // namespace gamedesign
