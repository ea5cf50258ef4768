#include "gamedesign/families.hpp"

#include <cmath>

#include "gamedesign/errors.hpp"

namespace gamedesign {

double UtilityFamily::partial(int i, int j, const Vector& x) const {
  const double h = diff_.step_for(x[j]);
  Vector xp = x, xm = x;
  xp[j] += h;
  if (diff_.scheme == DiffSettings::Scheme::Forward) {
    return (value(i, xp) - value(i, x)) / h;
  }
  xm[j] -= h;
  return (value(i, xp) - value(i, xm)) / (2.0 * h);
}

double UtilityFamily::own_second(int i, int j, const Vector& x) const {
  const double h = diff_.step_for(x[j]);
  Vector xp = x, xm = x;
  xp[j] += h;
  xm[j] -= h;
  return (partial(i, i, xp) - partial(i, i, xm)) / (2.0 * h);
}

// --- QuadraticUtility ----------------------------------------------------

QuadraticUtility::QuadraticUtility(Vector center, Vector weight)
    : center_(std::move(center)), weight_(std::move(weight)) {
  if (center_.size() != weight_.size()) {
    throw DimensionError("QuadraticUtility: center/weight size mismatch");
  }
}

double QuadraticUtility::value(int i, const Vector& x) const {
  const double d = x[i] - center_[i];
  return -weight_[i] * d * d;
}

double QuadraticUtility::partial(int i, int j, const Vector& x) const {
  if (i != j) return 0.0;
  return -2.0 * weight_[i] * (x[i] - center_[i]);
}

double QuadraticUtility::own_second(int i, int j, const Vector&) const {
  return i == j ? -2.0 * weight_[i] : 0.0;
}

// --- SeparableLogUtility ---------------------------------------------------

SeparableLogUtility::SeparableLogUtility(Vector beta, Vector k)
    : beta_(std::move(beta)), k_(std::move(k)) {
  if (beta_.size() != k_.size()) {
    throw DimensionError("SeparableLogUtility: beta/k size mismatch");
  }
  for (Eigen::Index i = 0; i < beta_.size(); ++i) {
    if (beta_[i] <= 0.0) {
      throw DomainError("SeparableLogUtility: beta must be positive");
    }
    if (k_[i] < 0.0) {
      throw DomainError("SeparableLogUtility: k must be nonnegative");
    }
  }
}

double SeparableLogUtility::value(int i, const Vector& x) const {
  if (x[i] <= -1.0) {
    throw DomainError("SeparableLogUtility: x_i <= -1 outside log domain");
  }
  return beta_[i] * std::log1p(x[i]) - k_[i] * x[i];
}

double SeparableLogUtility::partial(int i, int j, const Vector& x) const {
  if (i != j) return 0.0;
  return beta_[i] / (1.0 + x[i]) - k_[i];
}

double SeparableLogUtility::own_second(int i, int j, const Vector& x) const {
  if (i != j) return 0.0;
  const double d = 1.0 + x[i];
  return -beta_[i] / (d * d);
}

// --- SirLogUtility ---------------------------------------------------------

SirLogUtility::SirLogUtility(Vector h, double sigma2, double spreading_gain,
                             Vector beta)
    : h_(std::move(h)), beta_(std::move(beta)), sigma2_(sigma2),
      gain_(spreading_gain) {
  if (h_.size() != beta_.size()) {
    throw DimensionError("SirLogUtility: h/beta size mismatch");
  }
  for (Eigen::Index i = 0; i < h_.size(); ++i) {
    if (h_[i] <= 0.0) throw DomainError("SirLogUtility: channel gains h_i > 0 required");
  }
  if (gain_ <= 0.0) throw DomainError("SirLogUtility: spreading gain L > 0 required");
  if (sigma2_ < 0.0) throw DomainError("SirLogUtility: sigma2 >= 0 required");
}

double SirLogUtility::interference(int i, const Vector& x) const {
  double s = sigma2_;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (j != i) s += h_[j] * x[j];
  }
  return s;
}

double SirLogUtility::sir(int i, const Vector& x) const {
  const double denom = interference(i, x);
  if (denom <= 0.0) {
    throw DomainError("sir: zero interference and zero noise");
  }
  return gain_ * h_[i] * x[i] / denom;
}

double SirLogUtility::loaded_denominator(int i, const Vector& x) const {
  return interference(i, x) + gain_ * h_[i] * x[i];
}

double SirLogUtility::value(int i, const Vector& x) const {
  return beta_[i] * std::log1p(sir(i, x));
}

double SirLogUtility::partial(int i, int j, const Vector& x) const {
  // d/dx log(1+s_i) = (d s_i/dx) / (1+s_i); 1+s_i = d_i / I_i with
  // d_i = I_i + L h_i x_i.
  const double I = interference(i, x);
  const double d = I + gain_ * h_[i] * x[i];
  if (i == j) {
    return beta_[i] * gain_ * h_[i] / d;
  }
  return -beta_[i] * gain_ * h_[i] * x[i] * h_[j] / (I * d);
}

double SirLogUtility::own_second(int i, int j, const Vector& x) const {
  const double d = loaded_denominator(i, x);
  const double dd = (i == j) ? gain_ * h_[i] : h_[j];
  return -beta_[i] * gain_ * h_[i] * dd / (d * d);
}

// --- OsnrLogUtility ----------------------------------------------------------

OsnrLogUtility::OsnrLogUtility(Matrix gamma, double n0, Vector a, Vector beta,
                               bool with_linear_term)
    : gamma_(std::move(gamma)), a_(std::move(a)), beta_(std::move(beta)),
      n0_(n0), with_linear_term_(with_linear_term) {
  const auto n = a_.size();
  if (gamma_.rows() != n || gamma_.cols() != n || beta_.size() != n) {
    throw DimensionError("OsnrLogUtility: Gamma/a/beta size mismatch");
  }
  if (n0_ <= 0.0) throw DomainError("OsnrLogUtility: n0 > 0 required");
  if ((gamma_.array() < 0.0).any()) {
    throw DomainError("OsnrLogUtility: Gamma entries must be nonnegative");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a_[i] <= 0.0) throw DomainError("OsnrLogUtility: a_i > 0 required");
  }
  gamma_tilde_ = gamma_;
  gamma_tilde_.diagonal() = a_;
}

double OsnrLogUtility::loaded(int i, const Vector& x) const {
  return n0_ + gamma_tilde_.row(i).dot(x);
}

double OsnrLogUtility::cross(int i, const Vector& x) const {
  double s = n0_;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (j != i) s += gamma_(i, j) * x[j];
  }
  return s;
}

double OsnrLogUtility::osnr(int i, const Vector& x) const {
  return x[i] / (n0_ + gamma_.row(i).dot(x));
}

double OsnrLogUtility::value(int i, const Vector& x) const {
  const double u = beta_[i] * std::log(loaded(i, x) / cross(i, x));
  return with_linear_term_ ? u - beta_[i] * x[i] : u;
}

double OsnrLogUtility::partial(int i, int j, const Vector& x) const {
  const double num = loaded(i, x);
  const double den = cross(i, x);
  double g;
  if (i == j) {
    g = beta_[i] * a_[i] / num;
    if (with_linear_term_) g -= beta_[i];
  } else {
    g = beta_[i] * gamma_(i, j) * (1.0 / num - 1.0 / den);
  }
  return g;
}

double OsnrLogUtility::own_second(int i, int j, const Vector& x) const {
  const double num = loaded(i, x);
  return -beta_[i] * a_[i] * gamma_tilde_(i, j) / (num * num);
}

}  // namespace gamedesign
