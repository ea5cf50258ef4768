#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "gamedesign/errors.hpp"

namespace gamedesign {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// One entry per player. Actions use scenario units (mW for the power games),
// prices are per unit action. Prices are kept non-negative at ingestion and
// dynamics boundaries; evaluation routines accept any finite vector so that
// finite differences and transient ODE states remain well defined.
using ActionVector = Vector;
using PriceVector = Vector;

/// Finite-difference configuration shared by every numeric-derivative path.
struct DiffSettings {
  enum class Scheme { Central, Forward };
  double fd_step = 1e-6;  // relative step, scaled by max(1, |coordinate|)
  Scheme scheme = Scheme::Central;

  double step_for(double coordinate) const {
    return fd_step * std::max(1.0, std::abs(coordinate));
  }
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline void require_size(const Vector& v, int n, const char* name) {
  if (v.size() != n) {
    throw DimensionError(std::string(name) + ": expected length " +
                         std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

inline void require_finite(const Vector& v, const char* name) {
  if (!v.allFinite()) {
    throw NumericsError(std::string(name) + ": non-finite entry");
  }
}

/// Clamps negative prices to zero in place. Returns the number of entries
/// clamped; callers record it as a warning rather than rejecting the vector.
inline int clamp_prices(PriceVector& alpha) {
  int clamped = 0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0.0) {
      alpha[i] = 0.0;
      ++clamped;
    }
  }
  return clamped;
}

/// Deterministic low-discrepancy point set (Halton). `skip` offsets the
/// sequence start so different seeds probe different points.
class HaltonSampler {
 public:
  explicit HaltonSampler(int dimension, std::uint64_t skip = 0)
      : dimension_(dimension), index_(skip + 1) {}

  /// Next point in the unit cube (0,1)^d.
  Vector next() {
    static constexpr int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                     23, 29, 31, 37, 41, 43, 47, 53};
    Vector p(dimension_);
    for (int d = 0; d < dimension_; ++d) {
      const int base = primes[d % 16];
      double f = 1.0, r = 0.0;
      for (std::uint64_t i = index_; i > 0; i /= base) {
        f /= base;
        r += f * static_cast<double>(i % base);
      }
      p[d] = r;
    }
    ++index_;
    return p;
  }

 private:
  int dimension_;
  std::uint64_t index_;
};

}  // namespace gamedesign
