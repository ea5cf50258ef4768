#include "gamedesign/catalog.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gamedesign/errors.hpp"

namespace gamedesign {

namespace {

constexpr double kSingularRelTol = 1e-14;

Vector solve_checked(const Matrix& M, const Vector& rhs, const char* what) {
  Eigen::FullPivLU<Matrix> lu(M);
  const double max_abs = M.cwiseAbs().maxCoeff();
  if (!lu.isInvertible() ||
      std::abs(lu.determinant()) < kSingularRelTol * std::pow(max_abs, M.rows())) {
    throw SingularMatrixError(std::string(what) + ": singular matrix");
  }
  return lu.solve(rhs);
}

}  // namespace

// --- WirelessSirGame -------------------------------------------------------

void WirelessSirGame::validate() const {
  const int n = players();
  if (beta.size() != n) throw DimensionError("WirelessSirGame: h/beta size mismatch");
  if (s_bar.size() != 0 && s_bar.size() != n) {
    throw DimensionError("WirelessSirGame: s_bar size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (h[i] <= 0.0) throw DomainError("WirelessSirGame: h_i > 0 required");
    if (beta[i] <= 0.0) throw DomainError("WirelessSirGame: beta_i > 0 required");
  }
  if (L <= 0.0) throw DomainError("WirelessSirGame: L > 0 required");
  if (sigma2 < 0.0) throw DomainError("WirelessSirGame: sigma2 >= 0 required");
  for (int i = 0; i < s_bar.size(); ++i) {
    if (s_bar[i] < 0.0) throw DomainError("WirelessSirGame: s_bar >= 0 required");
  }
}

Matrix WirelessSirGame::system_matrix() const {
  const int n = players();
  Matrix A = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) A(i, j) = h[j] / (L * h[i]);
    }
  }
  return A;
}

Matrix WirelessSirGame::qos_matrix() const {
  if (s_bar.size() == 0) {
    throw DomainError("WirelessSirGame: s_bar required for the QoS matrix");
  }
  const int n = players();
  Matrix S(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      S(i, j) = (i == j) ? h[i] : -h[j] * s_bar[i] / L;
    }
  }
  return S;
}

Vector WirelessSirGame::qos_offset() const {
  if (s_bar.size() == 0) {
    throw DomainError("WirelessSirGame: s_bar required for the QoS offset");
  }
  return s_bar * sigma2 / L;
}

GameSpec WirelessSirGame::to_game_spec() const {
  validate();
  const int n = players();
  auto utility = std::make_shared<SirLogUtility>(h, sigma2, L, beta);
  auto pricing = std::make_shared<LinearOwnPricing>();
  GameSpec game = make_game(
      n, utility, pricing,
      ConstraintSet::box(Vector::Zero(n), Vector::Constant(n, x_max)));
  game.params["L"] = L;
  game.params["sigma2"] = sigma2;

  struct Map final : NeMap {
    WirelessSirGame g;
    ActionVector solve(const PriceVector& alpha) const override {
      return wireless_ne(g, alpha);
    }
  };
  auto map = std::make_shared<Map>();
  map->g = *this;
  game.ne_map = map;
  return game;
}

double sir(const ActionVector& x, const WirelessSirGame& game, int i) {
  SirLogUtility u(game.h, game.sigma2, game.L, game.beta);
  return u.sir(i, x);
}

ActionVector wireless_ne(const WirelessSirGame& game, const PriceVector& alpha,
                         bool* warned_negative) {
  game.validate();
  const int n = game.players();
  require_size(alpha, n, "alpha");
  for (int i = 0; i < n; ++i) {
    if (alpha[i] <= 0.0) {
      throw DomainError("wireless_ne: alpha_i > 0 required (c_i undefined)");
    }
  }
  Vector c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = game.beta[i] / alpha[i] - game.sigma2 / (game.L * game.h[i]);
  }
  Vector x = solve_checked(game.system_matrix(), c, "wireless_ne");
  if (warned_negative) *warned_negative = (x.array() < 0.0).any();
  return x;
}

// --- OpticalOsnrGame ---------------------------------------------------------

void OpticalOsnrGame::validate() const {
  const int n = players();
  if (gamma.rows() != n || gamma.cols() != n || beta.size() != n) {
    throw DimensionError("OpticalOsnrGame: Gamma/a/beta size mismatch");
  }
  if (n0 <= 0.0) throw DomainError("OpticalOsnrGame: n0 > 0 required");
  if ((gamma.array() < 0.0).any()) {
    throw DomainError("OpticalOsnrGame: Gamma entries must be nonnegative");
  }
  for (int i = 0; i < n; ++i) {
    if (a[i] <= 0.0) throw DomainError("OpticalOsnrGame: a_i > 0 required");
    if (beta[i] <= 0.0) throw DomainError("OpticalOsnrGame: beta_i > 0 required");
  }
}

Matrix OpticalOsnrGame::gamma_tilde() const {
  Matrix gt = gamma;
  gt.diagonal() = a;
  return gt;
}

double OpticalOsnrGame::diagonal_dominance_margin() const {
  const int n = players();
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) off += gamma(i, j);
    }
    margin = std::min(margin, a[i] - off);
  }
  return margin;
}

GameSpec OpticalOsnrGame::to_game_spec() const {
  validate();
  const int n = players();
  auto utility =
      std::make_shared<OsnrLogUtility>(gamma, n0, a, beta, with_linear_term);
  auto pricing = std::make_shared<LinearOwnPricing>();
  GameSpec game = make_game(
      n, utility, pricing,
      ConstraintSet::box(Vector::Zero(n), Vector::Constant(n, x_max)));
  game.params["n0"] = n0;

  struct Map final : NeMap {
    OpticalOsnrGame g;
    ActionVector solve(const PriceVector& alpha) const override {
      return osnr_ne(g, alpha);
    }
    bool has_jacobian() const override { return true; }
    Matrix jacobian(const PriceVector& alpha) const override {
      return osnr_H(g, alpha);
    }
  };
  auto map = std::make_shared<Map>();
  map->g = *this;
  game.ne_map = map;
  game.extra_certificates.emplace_back("diag_dominance",
                                       diagonal_dominance_margin());
  return game;
}

double osnr(const ActionVector& x, const OpticalOsnrGame& game, int i) {
  return x[i] / (game.n0 + game.gamma.row(i).dot(x));
}

namespace {

Vector osnr_c_vector(const OpticalOsnrGame& game, const PriceVector& alpha) {
  const int n = game.players();
  Vector c(n);
  for (int i = 0; i < n; ++i) {
    const double denom =
        game.with_linear_term ? alpha[i] + game.beta[i] : alpha[i];
    if (denom == 0.0) {
      throw DomainError("osnr_ne: alpha_i + beta_i must be nonzero");
    }
    c[i] = game.a[i] * game.beta[i] / denom - game.n0;
  }
  return c;
}

}  // namespace

ActionVector osnr_ne(const OpticalOsnrGame& game, const PriceVector& alpha,
                     bool* warned_negative) {
  game.validate();
  require_size(alpha, game.players(), "alpha");
  Vector x =
      solve_checked(game.gamma_tilde(), osnr_c_vector(game, alpha), "osnr_ne");
  if (warned_negative) *warned_negative = (x.array() < 0.0).any();
  return x;
}

Matrix osnr_H(const OpticalOsnrGame& game, const PriceVector& alpha) {
  game.validate();
  const int n = game.players();
  require_size(alpha, n, "alpha");
  Vector d(n);
  for (int i = 0; i < n; ++i) {
    const double denom =
        game.with_linear_term ? alpha[i] + game.beta[i] : alpha[i];
    d[i] = -game.a[i] * game.beta[i] / (denom * denom);
  }
  Eigen::FullPivLU<Matrix> lu(game.gamma_tilde());
  if (!lu.isInvertible()) {
    throw SingularMatrixError("osnr_H: GammaTilde singular");
  }
  return lu.solve(Matrix(d.asDiagonal()));
}

// --- SeparableLogGame ----------------------------------------------------------

void SeparableLogGame::validate() const {
  const int n = players();
  if (k.size() != n) throw DimensionError("SeparableLogGame: beta/k size mismatch");
  for (int i = 0; i < n; ++i) {
    if (beta[i] <= 0.0) throw DomainError("SeparableLogGame: beta_i > 0 required");
    if (k[i] < 0.0) throw DomainError("SeparableLogGame: k_i >= 0 required");
  }
  if (x_min <= -1.0) throw DomainError("SeparableLogGame: x_min must exceed -1");
}

GameSpec SeparableLogGame::to_game_spec() const {
  validate();
  const int n = players();
  auto utility = std::make_shared<SeparableLogUtility>(beta, k);
  std::shared_ptr<const PricingFamily> pricing;
  switch (pricing_kind) {
    case Pricing::LinearSum: pricing = std::make_shared<LinearSumPricing>(); break;
    case Pricing::QuadraticSum: pricing = std::make_shared<QuadraticSumPricing>(); break;
    case Pricing::ExpSum: pricing = std::make_shared<ExpSumPricing>(); break;
  }
  GameSpec game = make_game(
      n, utility, pricing,
      ConstraintSet::box(Vector::Constant(n, x_min), Vector::Constant(n, x_max)));

  if (pricing_kind != Pricing::ExpSum) {
    struct Map final : NeMap {
      SeparableLogGame g;
      ActionVector solve(const PriceVector& alpha) const override {
        return separable_ne(g, alpha);
      }
      bool has_jacobian() const override {
        return g.pricing_kind == Pricing::LinearSum;
      }
      Matrix jacobian(const PriceVector& alpha) const override {
        // dx*_i/dalpha_i = -beta_i/(alpha_i + k_i)^2, diagonal
        const int n = g.players();
        Matrix H = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
          const double d = alpha[i] + g.k[i];
          H(i, i) = -g.beta[i] / (d * d);
        }
        return H;
      }
    };
    auto map = std::make_shared<Map>();
    map->g = *this;
    game.ne_map = map;
  }
  return game;
}

ActionVector separable_ne(const SeparableLogGame& game,
                          const PriceVector& alpha) {
  game.validate();
  const int n = game.players();
  require_size(alpha, n, "alpha");
  Vector x(n);
  switch (game.pricing_kind) {
    case SeparableLogGame::Pricing::LinearSum: {
      for (int i = 0; i < n; ++i) {
        const double d = alpha[i] + game.k[i];
        if (d <= 0.0) {
          throw DomainError("separable_ne: alpha_i + k_i > 0 required");
        }
        x[i] = game.beta[i] / d - 1.0;
      }
      break;
    }
    case SeparableLogGame::Pricing::QuadraticSum: {
      // FOC per player: 2 alpha_i x + k_i - beta_i/(1+x) = 0, increasing in x.
      for (int i = 0; i < n; ++i) {
        if (alpha[i] + game.k[i] <= 0.0) {
          throw DomainError("separable_ne: alpha_i + k_i > 0 required");
        }
        auto foc = [&](double t) {
          return 2.0 * alpha[i] * t + game.k[i] - game.beta[i] / (1.0 + t);
        };
        double lo = game.x_min, hi = game.x_max;
        if (foc(lo) >= 0.0) { x[i] = lo; continue; }
        if (foc(hi) <= 0.0) { x[i] = hi; continue; }
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (foc(mid) > 0.0) hi = mid; else lo = mid;
          if (hi - lo < 1e-15 * (1.0 + std::abs(mid))) break;
        }
        x[i] = 0.5 * (lo + hi);
      }
      break;
    }
    case SeparableLogGame::Pricing::ExpSum:
      throw DomainError(
          "separable_ne: exp-sum pricing couples players; use the iterative "
          "solver");
  }
  return x;
}

}  // namespace gamedesign
