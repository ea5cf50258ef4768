#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gamedesign/types.hpp"

namespace gamedesign {

struct GameSpec;

/// Which per-player QoS metric a trajectory carries in dB.
enum class MetricKind { None, SirDb, OsnrDb };

/// SIR for wireless games, OSNR for optical ones, none otherwise.
MetricKind metric_kind_for(const GameSpec& game);

/// Per-player metric in dB (NaN-filled when the game has none).
Vector metrics_db(const GameSpec& game, const Vector& x);

/// Time-stamped series shared by all simulators. Columns per sample:
/// t, x_1..x_N, alpha_1..alpha_N, welfare, lyapunov, metric_1..metric_N.
struct Trajectory {
  int n_players = 0;
  MetricKind metric_kind = MetricKind::None;

  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> alpha;
  std::vector<double> welfare;
  std::vector<double> lyapunov;
  std::vector<Vector> metric;

  int clamped_prices = 0;  // negative-price excursions clamped to zero
  std::vector<std::string> notes;

  std::size_t rows() const { return t.size(); }
  void push(double time, const Vector& state, const Vector& prices,
            double welfare_value, double lyapunov_value,
            const Vector& metric_values);

  /// t strictly increasing and column count 2N + 3 + N.
  void check_invariants() const;

  /// RFC 4180 CSV with a header row and 15 significant digits.
  void write_csv(std::ostream& os) const;
  void write_csv_file(const std::string& path) const;
};

}  // namespace gamedesign
