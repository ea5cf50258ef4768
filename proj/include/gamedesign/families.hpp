#pragma once

#include <functional>
#include <memory>
#include <string>

#include "gamedesign/types.hpp"

namespace gamedesign {

/// Player utility family U_i(x). Closed families override the derivative
/// hooks with analytic expressions; the base-class fallbacks differentiate
/// value() by central differences so an opaque family only needs value().
class UtilityFamily {
 public:
  virtual ~UtilityFamily() = default;

  virtual int players() const = 0;
  virtual std::string name() const = 0;

  virtual double value(int i, const Vector& x) const = 0;

  /// dU_i/dx_j
  virtual double partial(int i, int j, const Vector& x) const;

  /// d2U_i/(dx_i dx_j) — the row of U_i's Hessian used by Q and Theta.
  virtual double own_second(int i, int j, const Vector& x) const;

  /// True when U_i depends on x_i only (enables the reduced pricing sum).
  virtual bool separable() const { return false; }

  /// True when own_second is analytic (selects the analytic Q path).
  virtual bool has_analytic_second() const { return false; }

  const DiffSettings& diff() const { return diff_; }
  void set_diff(DiffSettings d) { diff_ = d; }

 private:
  DiffSettings diff_{};
};

/// Pricing family p_i(x). Only own-partials enter the model: the
/// pseudo-gradient needs dp_i/dx_i and Q needs d2p_i/(dx_i dx_j).
class PricingFamily {
 public:
  virtual ~PricingFamily() = default;

  virtual std::string name() const = 0;

  virtual double value(int i, const Vector& x) const = 0;
  virtual double own_partial(int i, const Vector& x) const = 0;
  virtual double own_second(int i, int j, const Vector& x) const = 0;
};

// --- Utility families ---------------------------------------------------

/// U_i = -w_i (x_i - c_i)^2
class QuadraticUtility final : public UtilityFamily {
 public:
  QuadraticUtility(Vector center, Vector weight);
  explicit QuadraticUtility(int n)
      : QuadraticUtility(Vector::Zero(n), Vector::Ones(n)) {}

  int players() const override { return static_cast<int>(center_.size()); }
  std::string name() const override { return "quadratic"; }
  double value(int i, const Vector& x) const override;
  double partial(int i, int j, const Vector& x) const override;
  double own_second(int i, int j, const Vector& x) const override;
  bool separable() const override { return true; }
  bool has_analytic_second() const override { return true; }

 private:
  Vector center_, weight_;
};

/// U_i = beta_i log(1 + x_i) - k_i x_i
class SeparableLogUtility final : public UtilityFamily {
 public:
  SeparableLogUtility(Vector beta, Vector k);

  int players() const override { return static_cast<int>(beta_.size()); }
  std::string name() const override { return "separable-log"; }
  double value(int i, const Vector& x) const override;
  double partial(int i, int j, const Vector& x) const override;
  double own_second(int i, int j, const Vector& x) const override;
  bool separable() const override { return true; }
  bool has_analytic_second() const override { return true; }

  const Vector& beta() const { return beta_; }
  const Vector& k() const { return k_; }

 private:
  Vector beta_, k_;
};

/// U_i = beta_i log(1 + s_i(x)) with SIR s_i = L h_i x_i / (sum_{j!=i} h_j x_j + sigma2).
/// The spreading gain L sits in the numerator so that the equilibrium system
/// A x* = c and the QoS matrices S, b come out in closed form.
class SirLogUtility final : public UtilityFamily {
 public:
  SirLogUtility(Vector h, double sigma2, double spreading_gain, Vector beta);

  int players() const override { return static_cast<int>(h_.size()); }
  std::string name() const override { return "sir-log"; }
  double value(int i, const Vector& x) const override;
  double partial(int i, int j, const Vector& x) const override;
  double own_second(int i, int j, const Vector& x) const override;
  bool has_analytic_second() const override { return true; }

  double sir(int i, const Vector& x) const;
  /// interference + own-signal denominator: sum_{j!=i} h_j x_j + sigma2 + L h_i x_i
  double loaded_denominator(int i, const Vector& x) const;

 private:
  double interference(int i, const Vector& x) const;

  Vector h_, beta_;
  double sigma2_, gain_;
};

/// U_i = beta_i (log(1 + a_i g_i/(1 - Gamma_ii g_i)) - x_i) with OSNR
/// g_i = x_i/(n0 + sum_j Gamma_ij x_j). The log simplifies to
/// log((n0 + sum_j Gt_ij x_j)/(n0 + sum_{j!=i} Gamma_ij x_j)) where Gt has
/// a_i on the diagonal. with_linear_term=false drops the -x_i term.
class OsnrLogUtility final : public UtilityFamily {
 public:
  OsnrLogUtility(Matrix gamma, double n0, Vector a, Vector beta,
                 bool with_linear_term);

  int players() const override { return static_cast<int>(a_.size()); }
  std::string name() const override { return "osnr-log"; }
  double value(int i, const Vector& x) const override;
  double partial(int i, int j, const Vector& x) const override;
  double own_second(int i, int j, const Vector& x) const override;
  bool has_analytic_second() const override { return true; }

  double osnr(int i, const Vector& x) const;
  const Matrix& gamma() const { return gamma_; }
  const Matrix& gamma_tilde() const { return gamma_tilde_; }
  double n0() const { return n0_; }
  const Vector& a() const { return a_; }
  const Vector& beta() const { return beta_; }
  bool with_linear_term() const { return with_linear_term_; }

 private:
  // n0 + sum_j Gt_ij x_j (includes own channel through a_i)
  double loaded(int i, const Vector& x) const;
  // n0 + sum_{j!=i} Gamma_ij x_j
  double cross(int i, const Vector& x) const;

  Matrix gamma_, gamma_tilde_;
  Vector a_, beta_;
  double n0_;
  bool with_linear_term_;
};

/// Extensibility hook: arbitrary callable with derivatives by finite
/// differences of value() only.
class OpaqueUtility final : public UtilityFamily {
 public:
  using Fn = std::function<double(int, const Vector&)>;
  OpaqueUtility(int n, Fn fn, bool separable = false)
      : n_(n), fn_(std::move(fn)), separable_(separable) {}

  int players() const override { return n_; }
  std::string name() const override { return "opaque"; }
  double value(int i, const Vector& x) const override { return fn_(i, x); }
  bool separable() const override { return separable_; }

 private:
  int n_;
  Fn fn_;
  bool separable_;
};

// --- Pricing families ----------------------------------------------------

/// p_i = x_i
class LinearOwnPricing final : public PricingFamily {
 public:
  std::string name() const override { return "linear"; }
  double value(int i, const Vector& x) const override { return x[i]; }
  double own_partial(int, const Vector&) const override { return 1.0; }
  double own_second(int, int, const Vector&) const override { return 0.0; }
};

/// p_i = sum_j x_j
class LinearSumPricing final : public PricingFamily {
 public:
  std::string name() const override { return "linear-sum"; }
  double value(int, const Vector& x) const override { return x.sum(); }
  double own_partial(int, const Vector&) const override { return 1.0; }
  double own_second(int, int, const Vector&) const override { return 0.0; }
};

/// p_i = coeff * x_i^2
class QuadraticOwnPricing final : public PricingFamily {
 public:
  explicit QuadraticOwnPricing(double coeff = 1.0) : coeff_(coeff) {}
  std::string name() const override { return "quadratic"; }
  double value(int i, const Vector& x) const override {
    return coeff_ * x[i] * x[i];
  }
  double own_partial(int i, const Vector& x) const override {
    return 2.0 * coeff_ * x[i];
  }
  double own_second(int i, int j, const Vector&) const override {
    return i == j ? 2.0 * coeff_ : 0.0;
  }

 private:
  double coeff_;
};

/// p_i = sum_j x_j^2
class QuadraticSumPricing final : public PricingFamily {
 public:
  std::string name() const override { return "quadratic-sum"; }
  double value(int, const Vector& x) const override { return x.squaredNorm(); }
  double own_partial(int i, const Vector& x) const override {
    return 2.0 * x[i];
  }
  double own_second(int i, int j, const Vector&) const override {
    return i == j ? 2.0 : 0.0;
  }
};

/// p_i = exp(x_i)
class ExpOwnPricing final : public PricingFamily {
 public:
  std::string name() const override { return "exp"; }
  double value(int i, const Vector& x) const override {
    return std::exp(x[i]);
  }
  double own_partial(int i, const Vector& x) const override {
    return std::exp(x[i]);
  }
  double own_second(int i, int j, const Vector& x) const override {
    return i == j ? std::exp(x[i]) : 0.0;
  }
};

/// p_i = exp(sum_j x_j)
class ExpSumPricing final : public PricingFamily {
 public:
  std::string name() const override { return "exp-sum"; }
  double value(int, const Vector& x) const override {
    return std::exp(x.sum());
  }
  double own_partial(int, const Vector& x) const override {
    return std::exp(x.sum());
  }
  double own_second(int, int, const Vector& x) const override {
    return std::exp(x.sum());
  }
};

}  // namespace gamedesign
