#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gamedesign/game.hpp"

namespace gamedesign {

struct SolverSettings {
  enum class Method { ProjectedPseudoGradient, BestResponseSweep };
  enum class Projection { Box, None };

  Method method = Method::ProjectedPseudoGradient;
  double step = 0.1;
  double tol = 1e-10;
  long max_iter = 100000;
  Projection projection = Projection::Box;

  static SolverSettings best_response(double tol = 1e-12,
                                      long max_iter = 100000) {
    SolverSettings s;
    s.method = Method::BestResponseSweep;
    s.tol = tol;
    s.max_iter = max_iter;
    return s;
  }
};

struct SolveResult {
  ActionVector x;
  long iterations = 0;
  double residual = 0.0;
};

/// Computes the Nash equilibrium iteratively. The stationarity measure is the
/// projected-gradient residual ||x - Proj(x - q(x))||_inf, which reduces to
/// ||q||_inf at inner points and to the box KKT residual on the boundary.
SolveResult solve_ne(const GameSpec& game, const PriceVector& alpha,
                     const ActionVector& x0, const SolverSettings& settings = {});

/// x* = T(alpha): the analytic map when the game carries one, solve_ne
/// from the box midpoint otherwise.
ActionVector ne_point(const GameSpec& game, const PriceVector& alpha,
                      const SolverSettings& settings = SolverSettings::best_response(),
                      const ActionVector* x_hint = nullptr);

struct CertificateEntry {
  std::string name;
  bool applicable = true;
  bool holds = false;
  double margin = std::numeric_limits<double>::quiet_NaN();
  int samples = 0;
};

/// Numeric evidence for the sufficient conditions: margins are worst-case
/// values over sampled points; holds means margin > 0. Sampled, not proven.
struct CertificateReport {
  std::vector<CertificateEntry> entries;

  const CertificateEntry* find(const std::string& name) const;
  /// All applicable conditions hold.
  bool all_hold() const;
};

struct CertifySampling {
  int n_samples = 100;
  std::uint64_t seed = 0;
  /// H is re-estimated per sample; cap the count when it needs fd re-solves.
  int max_h_samples = 8;
};

/// Evaluates Assumptions 1-4, Theta positive-definiteness and H
/// non-singularity at low-discrepancy points of the box hull, plus any
/// game-specific entries (e.g. OSNR diagonal dominance).
CertificateReport certify(const GameSpec& game, const PriceVector& alpha,
                          const CertifySampling& sampling = {});

/// H(alpha) = dx*/dalpha: analytic when available, otherwise central
/// differences with per-coordinate step 1e-4 (1 + |alpha_j|) and re-solve.
Matrix ne_map_jacobian(const GameSpec& game, const PriceVector& alpha,
                       const SolverSettings& settings = SolverSettings::best_response());

/// Forced finite-difference variant of ne_map_jacobian (idealized estimator
/// for games that do have an analytic map).
Matrix fd_ne_map_jacobian(const GameSpec& game, const PriceVector& alpha,
                          const SolverSettings& settings = SolverSettings::best_response());

}  // namespace gamedesign
