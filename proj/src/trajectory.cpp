#include "gamedesign/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "gamedesign/errors.hpp"
#include "gamedesign/game.hpp"

namespace gamedesign {

MetricKind metric_kind_for(const GameSpec& game) {
  if (dynamic_cast<const SirLogUtility*>(game.utility.get())) {
    return MetricKind::SirDb;
  }
  if (dynamic_cast<const OsnrLogUtility*>(game.utility.get())) {
    return MetricKind::OsnrDb;
  }
  return MetricKind::None;
}

Vector metrics_db(const GameSpec& game, const Vector& x) {
  const int n = game.n_players;
  if (const auto* u = dynamic_cast<const SirLogUtility*>(game.utility.get())) {
    Vector m(n);
    for (int i = 0; i < n; ++i) m[i] = 10.0 * std::log10(u->sir(i, x));
    return m;
  }
  if (const auto* u = dynamic_cast<const OsnrLogUtility*>(game.utility.get())) {
    Vector m(n);
    for (int i = 0; i < n; ++i) m[i] = 10.0 * std::log10(u->osnr(i, x));
    return m;
  }
  return Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
}

void Trajectory::push(double time, const Vector& state, const Vector& prices,
                      double welfare_value, double lyapunov_value,
                      const Vector& metric_values) {
  t.push_back(time);
  x.push_back(state);
  alpha.push_back(prices);
  welfare.push_back(welfare_value);
  lyapunov.push_back(lyapunov_value);
  metric.push_back(metric_values);
}

void Trajectory::check_invariants() const {
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] > t[k - 1])) {
      throw GameError("Trajectory: time stamps must be strictly increasing");
    }
  }
  for (std::size_t k = 0; k < rows(); ++k) {
    if (x[k].size() != n_players || alpha[k].size() != n_players ||
        metric[k].size() != n_players) {
      throw DimensionError("Trajectory: column count mismatch");
    }
  }
}

namespace {

void append_value(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  line += buf;
}

}  // namespace

void Trajectory::write_csv(std::ostream& os) const {
  check_invariants();
  std::string line = "t";
  for (int i = 1; i <= n_players; ++i) line += ",x_" + std::to_string(i);
  for (int i = 1; i <= n_players; ++i) line += ",alpha_" + std::to_string(i);
  line += ",welfare,lyapunov";
  for (int i = 1; i <= n_players; ++i) line += ",metric_" + std::to_string(i);
  os << line << "\r\n";

  for (std::size_t k = 0; k < rows(); ++k) {
    line.clear();
    append_value(line, t[k]);
    for (int i = 0; i < n_players; ++i) {
      line += ',';
      append_value(line, x[k][i]);
    }
    for (int i = 0; i < n_players; ++i) {
      line += ',';
      append_value(line, alpha[k][i]);
    }
    line += ',';
    append_value(line, welfare[k]);
    line += ',';
    append_value(line, lyapunov[k]);
    for (int i = 0; i < n_players; ++i) {
      line += ',';
      append_value(line, metric[k][i]);
    }
    os << line << "\r\n";
  }
}

void Trajectory::write_csv_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GameError("Trajectory: cannot open " + path);
  write_csv(out);
}

}  // namespace gamedesign
