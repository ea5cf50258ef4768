#include "gamedesign/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "gamedesign/errors.hpp"

namespace gamedesign {

namespace {

Vector project(const GameSpec& game, const Vector& x,
               SolverSettings::Projection projection) {
  if (projection == SolverSettings::Projection::None) return x;
  return game.box().clamp(x);
}

double stationarity_residual(const GameSpec& game, const PriceVector& alpha,
                             const Vector& x,
                             SolverSettings::Projection projection) {
  const Vector q = pseudo_gradient(game, alpha, x);
  const Vector moved = project(game, x - q, projection);
  return (x - moved).lpNorm<Eigen::Infinity>();
}

/// Minimizes J_i over [lo, hi] with the other actions fixed: safeguarded
/// Newton on the scalar first-order condition, bisection fallback. J_i is
/// strictly convex in x_i, so q_i is increasing on the interval.
double best_response_1d(const GameSpec& game, const PriceVector& alpha,
                        Vector& x, int i, double lo, double hi, double tol) {
  auto q_i = [&](double t) {
    const double saved = x[i];
    x[i] = t;
    const double v = alpha[i] * game.pricing->own_partial(i, x) -
                     game.utility->partial(i, i, x);
    x[i] = saved;
    return v;
  };
  auto q_i_slope = [&](double t) {
    const double saved = x[i];
    x[i] = t;
    const double v = alpha[i] * game.pricing->own_second(i, i, x) -
                     game.utility->own_second(i, i, x);
    x[i] = saved;
    return v;
  };

  double qlo = q_i(lo);
  if (qlo >= 0.0) return lo;
  double qhi = q_i(hi);
  if (qhi <= 0.0) return hi;

  double t = std::clamp(x[i], lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double qt = q_i(t);
    if (qt > 0.0) hi = t; else lo = t;
    if (std::abs(qt) < tol || hi - lo < 1e-16 * (1.0 + std::abs(t))) return t;
    const double slope = q_i_slope(t);
    double next = (slope > 0.0) ? t - qt / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

}  // namespace

SolveResult solve_ne(const GameSpec& game, const PriceVector& alpha,
                     const ActionVector& x0, const SolverSettings& settings) {
  require_size(x0, game.n_players, "x0");
  require_size(alpha, game.n_players, "alpha");
  if (settings.step <= 0.0 || settings.tol <= 0.0) {
    throw DomainError("solve_ne: step and tol must be positive");
  }
  const Box& box = game.box();
  if (!box.contains(x0, 1e-12)) {
    throw DomainError("solve_ne: x0 outside the box hull");
  }

  Vector x = project(game, x0, settings.projection);
  double residual = stationarity_residual(game, alpha, x, settings.projection);
  long iter = 0;

  if (settings.method == SolverSettings::Method::ProjectedPseudoGradient) {
    for (; iter < settings.max_iter && residual > settings.tol; ++iter) {
      const Vector q = pseudo_gradient(game, alpha, x);
      x = project(game, x - settings.step * q, settings.projection);
      if (!x.allFinite()) {
        throw NumericsError("solve_ne: iterate became non-finite");
      }
      residual = stationarity_residual(game, alpha, x, settings.projection);
    }
  } else {
    for (; iter < settings.max_iter && residual > settings.tol; ++iter) {
      for (int i = 0; i < game.n_players; ++i) {
        x[i] = best_response_1d(game, alpha, x, i, box.lower[i], box.upper[i],
                                0.01 * settings.tol);
      }
      residual = stationarity_residual(game, alpha, x, settings.projection);
    }
  }

  if (residual > settings.tol) {
    throw NonConvergenceError(
        "solve_ne: residual " + std::to_string(residual) + " after " +
            std::to_string(iter) + " iterations",
        x, residual);
  }
  return {x, iter, residual};
}

ActionVector ne_point(const GameSpec& game, const PriceVector& alpha,
                      const SolverSettings& settings,
                      const ActionVector* x_hint) {
  if (game.ne_map) return game.ne_map->solve(alpha);
  const Box& box = game.box();
  Vector x0 = x_hint ? *x_hint : Vector(0.5 * (box.lower + box.upper));
  return solve_ne(game, alpha, x0, settings).x;
}

const CertificateEntry* CertificateReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

bool CertificateReport::all_hold() const {
  for (const auto& e : entries) {
    if (e.applicable && !e.holds) return false;
  }
  return true;
}

CertificateReport certify(const GameSpec& game, const PriceVector& alpha,
                          const CertifySampling& sampling) {
  require_size(alpha, game.n_players, "alpha");
  const int n = game.n_players;
  const Box& box = game.box();
  const bool bounded = box.lower.allFinite() && box.upper.allFinite();

  HaltonSampler halton(n, sampling.seed * 1000ULL);
  std::vector<Vector> points;
  points.reserve(sampling.n_samples);
  for (int s = 0; s < sampling.n_samples; ++s) {
    points.push_back(box.from_unit(halton.next()));
  }

  double best_feasibility = -std::numeric_limits<double>::infinity();
  double min_own_curvature = std::numeric_limits<double>::infinity();
  double min_eig_sym_q = std::numeric_limits<double>::infinity();
  double min_grad_probe = std::numeric_limits<double>::infinity();

  const auto& hs = game.constraints.constraints();
  for (const Vector& x : points) {
    best_feasibility =
        std::max(best_feasibility, -game.constraints.max_violation(x));

    const Matrix Q = jacobian_Q(game, alpha, x);
    min_own_curvature = std::min(min_own_curvature, Q.diagonal().minCoeff());

    Eigen::SelfAdjointEigenSolver<Matrix> eig(Q + Q.transpose());
    min_eig_sym_q = std::min(min_eig_sym_q, eig.eigenvalues().minCoeff());

    for (int i = 0; i < n; ++i) {
      double max_grad = 0.0;
      for (const auto& c : hs) {
        max_grad = std::max(max_grad, std::abs(c.gradient(x)[i]));
      }
      min_grad_probe = std::min(min_grad_probe, max_grad);
    }
  }

  CertificateReport report;
  const int ns = sampling.n_samples;
  report.entries.push_back({"Assumption1", true,
                            bounded && best_feasibility > 0.0,
                            best_feasibility, ns});
  report.entries.push_back({"Assumption2", true, min_own_curvature > 0.0,
                            min_own_curvature, ns});
  report.entries.push_back({"Assumption3", true, min_eig_sym_q > 0.0,
                            min_eig_sym_q, ns});
  report.entries.push_back({"Assumption4", true, min_grad_probe > 0.0,
                            min_grad_probe, ns});

  // Theta(alpha, x) is the Jacobian of the pseudo-gradient in x — the same
  // matrix Q evaluated along trajectories; reported under the two-timescale
  // condition's name.
  report.entries.push_back({"Theta_pd", true, min_eig_sym_q > 0.0,
                            min_eig_sym_q, ns});

  // H non-singularity: |det H| at alpha and at scaled perturbations of it.
  {
    const int h_samples = game.ne_map && game.ne_map->has_jacobian()
                              ? sampling.n_samples
                              : std::min(sampling.n_samples,
                                         sampling.max_h_samples);
    double min_det = std::numeric_limits<double>::infinity();
    int done = 0;
    bool failed = false;
    HaltonSampler alpha_halton(n, 500 + sampling.seed * 1000ULL);
    for (int s = 0; s < h_samples; ++s) {
      PriceVector a = alpha;
      if (s > 0) {
        const Vector u = alpha_halton.next();
        for (int i = 0; i < n; ++i) {
          const double scale = 0.75 + 0.5 * u[i];
          a[i] = alpha[i] * scale + (alpha[i] == 0.0 ? 0.05 * u[i] : 0.0);
        }
      }
      try {
        const Matrix H = ne_map_jacobian(game, a);
        min_det = std::min(min_det, std::abs(H.determinant()));
        ++done;
      } catch (const GameError&) {
        failed = true;
        break;
      }
    }
    CertificateEntry e{"H_nonsingular", true, false,
                       std::numeric_limits<double>::quiet_NaN(), done};
    if (!failed && done > 0) {
      e.margin = min_det;
      e.holds = min_det > 0.0;
    } else {
      e.applicable = !failed;
    }
    report.entries.push_back(e);
  }

  // Game-specific closed-form margins (e.g. OSNR diagonal dominance).
  for (const auto& [name, margin] : game.extra_certificates) {
    report.entries.push_back({name, true, margin > 0.0, margin, 1});
  }
  if (!report.find("diag_dominance")) {
    report.entries.push_back({"diag_dominance", false, false,
                              std::numeric_limits<double>::quiet_NaN(), 0});
  }
  return report;
}

Matrix ne_map_jacobian(const GameSpec& game, const PriceVector& alpha,
                       const SolverSettings& settings) {
  require_size(alpha, game.n_players, "alpha");
  if (game.ne_map && game.ne_map->has_jacobian()) {
    return game.ne_map->jacobian(alpha);
  }
  return fd_ne_map_jacobian(game, alpha, settings);
}

Matrix fd_ne_map_jacobian(const GameSpec& game, const PriceVector& alpha,
                          const SolverSettings& settings) {
  require_size(alpha, game.n_players, "alpha");
  const int n = game.n_players;
  const ActionVector base = ne_point(game, alpha, settings);
  Matrix H(n, n);
  for (int j = 0; j < n; ++j) {
    const double d = 1e-4 * (1.0 + std::abs(alpha[j]));
    PriceVector ap = alpha, am = alpha;
    ap[j] += d;
    am[j] -= d;
    const ActionVector xp = ne_point(game, ap, settings, &base);
    const ActionVector xm = ne_point(game, am, settings, &base);
    H.col(j) = (xp - xm) / (2.0 * d);
  }
  return H;
}

}  // namespace gamedesign
