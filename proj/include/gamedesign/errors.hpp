#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace gamedesign {

/// Base class for all library errors.
class GameError : public std::runtime_error {
 public:
  explicit GameError(const std::string& what) : std::runtime_error(what) {}
};

/// Vector/matrix sizes inconsistent with the game's player count.
class DimensionError : public GameError {
 public:
  explicit DimensionError(const std::string& what) : GameError(what) {}
};

/// Non-finite value produced by an evaluation or finite-difference step.
class NumericsError : public GameError {
 public:
  explicit NumericsError(const std::string& what) : GameError(what) {}
};

/// Argument outside the domain of a closed-form expression.
class DomainError : public GameError {
 public:
  explicit DomainError(const std::string& what) : GameError(what) {}
};

class SingularMatrixError : public GameError {
 public:
  explicit SingularMatrixError(const std::string& what) : GameError(what) {}
};

/// Target point that no admissible price vector can realize.
class InfeasibleTargetError : public GameError {
 public:
  explicit InfeasibleTargetError(const std::string& what) : GameError(what) {}
};

/// Controller synthesis produced an unstable closed loop.
class DesignError : public GameError {
 public:
  explicit DesignError(const std::string& what) : GameError(what) {}
};

/// Simulated state left the admissible range (norm blow-up).
class DivergenceError : public GameError {
 public:
  explicit DivergenceError(const std::string& what) : GameError(what) {}
};

/// Iterative solver hit its iteration budget. Carries the last iterate so
/// callers can inspect how close the run got.
class NonConvergenceError : public GameError {
 public:
  NonConvergenceError(const std::string& what, Eigen::VectorXd last_iterate,
                      double residual)
      : GameError(what),
        last_iterate_(std::move(last_iterate)),
        residual_(residual) {}

  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  Eigen::VectorXd last_iterate_;
  double residual_;
};

}  // namespace gamedesign
