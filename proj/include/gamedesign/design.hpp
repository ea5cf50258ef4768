#pragma once

#include <string>
#include <vector>

#include "gamedesign/catalog.hpp"
#include "gamedesign/game.hpp"

namespace gamedesign {

struct DesignResult {
  PriceVector alpha;
  bool feasible = false;
  Vector per_player_sensitivity;  // dp_i/dx_i at the target
  std::vector<std::string> notes;
};

/// Inverse design: alpha_i = [dp_i(x_hat)/dx_i]^{-1} dU_i(x_hat)/dx_i.
/// Marks the target infeasible (instead of clamping) when a pricing
/// sensitivity vanishes or the formula yields a negative price — a clamped
/// price would place the equilibrium elsewhere.
DesignResult design_price(const GameSpec& game, const ActionVector& x_hat);

/// Prices that put the equilibrium on the QoS boundary S x = b: solves
/// x = S^{-1} b, maps through c = A x, then alpha_i = beta_i/(c_i +
/// sigma2/(L h_i)). Always re-solves the equilibrium and verifies
/// s_i(x) = s_bar_i before returning.
DesignResult wireless_qos_boundary_price(const WirelessSirGame& game);

}  // namespace gamedesign
