#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gamedesign/constraints.hpp"
#include "gamedesign/families.hpp"
#include "gamedesign/types.hpp"

namespace gamedesign {

/// Optional closed-form equilibrium map x* = T(alpha) attached by catalog
/// games. Generic modules fall back to the iterative solver when absent.
class NeMap {
 public:
  virtual ~NeMap() = default;
  virtual ActionVector solve(const PriceVector& alpha) const = 0;
  virtual bool has_jacobian() const { return false; }
  /// dx*_i/dalpha_j
  virtual Matrix jacobian(const PriceVector& alpha) const;
};

/// A parametric pricing game: cost J_i(alpha, x) = alpha_i p_i(x) - U_i(x)
/// on the constraint set Omega.
struct GameSpec {
  int n_players = 0;
  std::shared_ptr<const UtilityFamily> utility;
  std::shared_ptr<const PricingFamily> pricing;
  ConstraintSet constraints;
  std::map<std::string, double> params;  // echoed into run manifests

  std::shared_ptr<const NeMap> ne_map;  // optional analytic equilibrium map
  // Extra certificate entries contributed by the concrete game
  // (name, margin); installed by catalog constructors.
  std::vector<std::pair<std::string, double>> extra_certificates;

  const Box& box() const { return constraints.box_hull(); }
};

/// Makes a GameSpec after validating family dimensions against n_players.
GameSpec make_game(int n_players, std::shared_ptr<const UtilityFamily> utility,
                   std::shared_ptr<const PricingFamily> pricing,
                   ConstraintSet constraints);

/// J_i(alpha, x) = alpha_i p_i(x) - U_i(x)
double cost(const GameSpec& game, const PriceVector& alpha,
            const ActionVector& x, int i);

/// q(x), component i: dJ_i/dx_i = alpha_i dp_i/dx_i - dU_i/dx_i
Vector pseudo_gradient(const GameSpec& game, const PriceVector& alpha,
                       const ActionVector& x);

/// Q(x), entry (i,j) = d2 J_i/(dx_i dx_j). Analytic when the utility family
/// provides second partials, central differences of the pseudo-gradient
/// otherwise.
Matrix jacobian_Q(const GameSpec& game, const PriceVector& alpha,
                  const ActionVector& x, const DiffSettings& settings = {});

/// KKT residual at (x, multipliers): max_i |q_i + sum_j phi_ij dh_j/dx_i|
/// plus the worst complementary-slackness violation max_ij |phi_ij h_j(x)|.
/// multipliers[i] holds player i's vector of r nonnegative multipliers.
double kkt_residual(const GameSpec& game, const PriceVector& alpha,
                    const ActionVector& x,
                    const std::vector<Vector>& multipliers);

/// f(x) of the game dynamics: f_i = dU_i/dx_i.
Vector utility_gradient_own(const GameSpec& game, const ActionVector& x);

/// G(x) = diag(-dp_i/dx_i), the control channel of the game dynamics.
Vector control_channel_diagonal(const GameSpec& game, const ActionVector& x);

}  // namespace gamedesign
