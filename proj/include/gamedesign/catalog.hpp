#pragma once

#include <memory>

#include "gamedesign/game.hpp"

namespace gamedesign {

/// Single-cell uplink power control game: linear own-action pricing and
/// U_i = beta_i log(1 + s_i(x)). Powers and noise in mW.
struct WirelessSirGame {
  Vector h;        // channel gains, > 0
  double sigma2;   // noise power
  double L;        // spreading gain, > 0
  Vector beta;     // utility weights, > 0
  Vector s_bar;    // target SIR levels (>= 0); empty unless QoS scenario
  double x_max = 100.0;  // box hull upper bound per channel

  int players() const { return static_cast<int>(h.size()); }
  void validate() const;

  /// Equilibrium system matrix: unit diagonal, h_j/(L h_i) off-diagonal.
  Matrix system_matrix() const;
  /// QoS boundary matrix: h_i diagonal, -h_j s_bar_i / L off-diagonal.
  Matrix qos_matrix() const;
  /// QoS offsets b_i = s_bar_i sigma2 / L.
  Vector qos_offset() const;

  GameSpec to_game_spec() const;
};

/// s_i(x) = L h_i x_i / (sum_{j != i} h_j x_j + sigma2)
double sir(const ActionVector& x, const WirelessSirGame& game, int i);

/// Solves A x* = c with c_i = beta_i/alpha_i - sigma2/(L h_i). Negative
/// components are returned as-is; *warned_negative is set when present.
ActionVector wireless_ne(const WirelessSirGame& game, const PriceVector& alpha,
                         bool* warned_negative = nullptr);

/// Optical power control game: linear pricing and OSNR-like utility.
/// with_linear_term selects the utility variant carrying the extra -x_i.
struct OpticalOsnrGame {
  Matrix gamma;    // N x N system matrix, nonnegative entries
  double n0;       // input noise power (mW)
  Vector a;        // design gains, > 0
  Vector beta;     // utility weights, > 0
  bool with_linear_term = true;
  double x_max = 0.1;  // box hull upper bound (mW)

  int players() const { return static_cast<int>(a.size()); }
  void validate() const;

  /// Gamma with the diagonal replaced by a.
  Matrix gamma_tilde() const;
  /// min_i (a_i - sum_{j != i} Gamma_ij)
  double diagonal_dominance_margin() const;

  GameSpec to_game_spec() const;
};

/// gamma_i(x) = x_i / (n0 + sum_j Gamma_ij x_j)
double osnr(const ActionVector& x, const OpticalOsnrGame& game, int i);

/// x* = GammaTilde^{-1} C(alpha); C_i = a_i beta_i/(alpha_i + beta_i) - n0
/// when the utility carries the linear term, a_i beta_i/alpha_i - n0 otherwise.
ActionVector osnr_ne(const OpticalOsnrGame& game, const PriceVector& alpha,
                     bool* warned_negative = nullptr);

/// H(alpha) = GammaTilde^{-1} diag(dC_i/dalpha_i)
Matrix osnr_H(const OpticalOsnrGame& game, const PriceVector& alpha);

/// Separable log game: U_i = beta_i log(1+x_i) - k_i x_i with a shared
/// pricing function over the action sum.
struct SeparableLogGame {
  enum class Pricing { LinearSum, QuadraticSum, ExpSum };

  Vector beta;   // > 0
  Vector k;      // >= 0
  Pricing pricing_kind = Pricing::LinearSum;
  double x_min = 0.0;
  double x_max = 50.0;

  int players() const { return static_cast<int>(beta.size()); }
  void validate() const;

  GameSpec to_game_spec() const;
};

/// Closed form x*_i = beta_i/(alpha_i + k_i) - 1 for linear-sum pricing;
/// per-player bisection on the first-order condition for quadratic-sum.
ActionVector separable_ne(const SeparableLogGame& game,
                          const PriceVector& alpha);

}  // namespace gamedesign
