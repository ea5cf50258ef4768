#include "gamedesign/scenario.hpp"

#include <fstream>
#include <future>
#include <iostream>

#include "gamedesign/control.hpp"
#include "gamedesign/design.hpp"
#include "gamedesign/errors.hpp"
#include "gamedesign/pricing.hpp"
#include "gamedesign/solver.hpp"
#include "gamedesign/trajectory.hpp"

#include "reproduce_sec6_fixture.hpp"  // generated: embeds configs/reproduce_sec6.json

namespace gamedesign {

namespace {

// --- parsing helpers -------------------------------------------------------

Vector to_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw DomainError(field + ": expected an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DomainError(field + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw DomainError(field + ": expected an array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw DomainError(field + ": ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(vector_to_json(m.row(r)));
  }
  return out;
}

// --- validation ------------------------------------------------------------

void check_number(const json& obj, const std::string& key,
                  const std::string& where, std::vector<std::string>& out,
                  bool required = true) {
  if (!obj.contains(key)) {
    if (required) out.push_back(where + "." + key + ": missing");
    return;
  }
  if (!obj[key].is_number()) out.push_back(where + "." + key + ": not a number");
}

void check_array(const json& obj, const std::string& key,
                 const std::string& where, std::vector<std::string>& out,
                 bool required = true) {
  if (!obj.contains(key)) {
    if (required) out.push_back(where + "." + key + ": missing");
    return;
  }
  if (!obj[key].is_array()) out.push_back(where + "." + key + ": not an array");
}

std::vector<std::string> validate_game(const json& g) {
  std::vector<std::string> out;
  if (!g.contains("kind") || !g["kind"].is_string()) {
    out.push_back("game.kind: missing or not a string");
    return out;
  }
  const std::string kind = g["kind"].get<std::string>();
  if (kind == "wireless") {
    check_array(g, "h", "game", out);
    check_array(g, "beta", "game", out);
    check_number(g, "sigma2", "game", out);
    check_number(g, "L", "game", out);
    check_array(g, "s_bar", "game", out, /*required=*/false);
  } else if (kind == "osnr") {
    check_array(g, "gamma", "game", out);
    check_array(g, "a", "game", out);
    check_array(g, "beta", "game", out);
    check_number(g, "n0", "game", out);
  } else if (kind == "separable") {
    check_array(g, "beta", "game", out);
    check_array(g, "k", "game", out);
  } else if (kind == "opaque") {
    check_array(g, "center", "game", out);
    check_array(g, "weights", "game", out);
  } else {
    out.push_back("game.kind: unknown game '" + kind + "'");
  }
  return out;
}

std::vector<std::string> validate_task(const json& t, const json& g) {
  std::vector<std::string> out;
  if (!t.contains("kind") || !t["kind"].is_string()) {
    out.push_back("task.kind: missing or not a string");
    return out;
  }
  const std::string kind = t["kind"].get<std::string>();
  const std::string game_kind =
      g.contains("kind") && g["kind"].is_string() ? g["kind"].get<std::string>()
                                                  : "";
  if (kind == "solve") {
    check_array(t, "alpha", "task", out);
  } else if (kind == "certify") {
    check_array(t, "alpha", "task", out);
    if (t.contains("n_samples") && (!t["n_samples"].is_number_integer() ||
                                    t["n_samples"].get<int>() < 1)) {
      out.push_back("task.n_samples: must be a positive integer");
    }
  } else if (kind == "design") {
    check_array(t, "target", "task", out);
  } else if (kind == "qos-design") {
    if (game_kind != "wireless") {
      out.push_back("task.kind: qos-design requires a wireless game");
    } else if (!g.contains("s_bar")) {
      out.push_back("game.s_bar: required for qos-design");
    }
  } else if (kind == "regulate") {
    check_array(t, "target", "task", out);
    check_array(t, "x0", "task", out);
    check_array(t, "lambda1", "task", out);
    check_number(t, "dt", "task", out);
    check_number(t, "T", "task", out);
    for (const char* key : {"dt", "T"}) {
      if (t.contains(key) && t[key].is_number() && t[key].get<double>() <= 0.0) {
        out.push_back(std::string("task.") + key + ": must be positive");
      }
    }
    if (t.value("mode", std::string("proportional")) == "integral") {
      check_array(t, "lambda2", "task", out);
    }
  } else if (kind == "price-loop" || kind == "reproduce-sec6") {
    check_array(t, "alpha0", "task", out);
    if (!t.value("assume_settled", kind == "price-loop" ? true : false)) {
      check_array(t, "x0", "task", out);
    }
    if (t.contains("epsilon") &&
        (!t["epsilon"].is_number() || t["epsilon"].get<double>() <= 0.0)) {
      out.push_back("task.epsilon: must be a positive number");
    }
    if (t.contains("dt_fast") &&
        (!t["dt_fast"].is_number() || t["dt_fast"].get<double>() <= 0.0)) {
      out.push_back("task.dt_fast: must be a positive number");
    }
    if (t.contains("outer_iters") && (!t["outer_iters"].is_number_integer() ||
                                      t["outer_iters"].get<int>() < 0)) {
      out.push_back("task.outer_iters: must be a nonnegative integer");
    }
    if (kind == "reproduce-sec6" && game_kind != "osnr") {
      out.push_back("task.kind: reproduce-sec6 requires the osnr game");
    }
  } else if (kind == "penalty-loop") {
    check_array(t, "alpha0", "task", out);
    if (game_kind != "wireless") {
      out.push_back("task.kind: penalty-loop requires a wireless game");
    } else if (!t.contains("s_bar") && !g.contains("s_bar")) {
      out.push_back("task.s_bar: required (or set game.s_bar)");
    }
  } else {
    out.push_back("task.kind: unknown task '" + kind + "'");
  }
  return out;
}

// --- task runners ------------------------------------------------------------

SolverSettings solver_from_task(const json& t) {
  SolverSettings s = SolverSettings::best_response();
  if (t.value("method", std::string("best-response-sweep")) ==
      "projected-pseudo-gradient") {
    s.method = SolverSettings::Method::ProjectedPseudoGradient;
  }
  s.step = t.value("step", 0.1);
  s.tol = t.value("tol", 1e-10);
  s.max_iter = t.value("max_iter", static_cast<long>(100000));
  return s;
}

TwoTimescaleConfig timescale_from_task(const json& t) {
  TwoTimescaleConfig cfg = TwoTimescaleConfig::with_epsilon(
      t.value("epsilon", 0.01));
  if (t.contains("inner_steps_per_outer")) {
    cfg.inner_steps_per_outer = t["inner_steps_per_outer"].get<int>();
  }
  cfg.dt_fast = t.value("dt_fast", 1e-5);
  cfg.outer_iters = t.value("outer_iters", 50);
  cfg.outer_step = t.value("outer_step", 1.0);
  cfg.adapt_step = t.value("adapt_step", true);
  cfg.h_source = t.value("h_source", std::string("analytic")) ==
                         "finite-difference"
                     ? HSource::FiniteDifference
                     : HSource::Analytic;
  return cfg;
}

json certificate_to_json(const CertificateReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json je;
    je["name"] = e.name;
    je["applicable"] = e.applicable;
    je["holds"] = e.holds;
    if (std::isfinite(e.margin)) je["margin"] = e.margin;
    je["samples"] = e.samples;
    entries.push_back(je);
  }
  return entries;
}

struct TaskOutcome {
  json report;
  std::optional<Trajectory> trajectory;
  int exit_code = kExitOk;
};

TaskOutcome run_solve(const BuiltGame& built, const json& t) {
  TaskOutcome out;
  const Vector alpha = to_vector(t.at("alpha"), "task.alpha");
  const Box& box = built.spec.box();
  const Vector x0 = t.contains("x0") ? to_vector(t["x0"], "task.x0")
                                     : Vector(0.5 * (box.lower + box.upper));
  try {
    const SolveResult r = solve_ne(built.spec, alpha, x0, solver_from_task(t));
    out.report["verdict"] = "converged";
    out.report["x"] = vector_to_json(r.x);
    out.report["iterations"] = r.iterations;
    out.report["residual"] = r.residual;
    const int nc = built.spec.constraints.size();
    std::vector<Vector> phi(built.spec.n_players, Vector::Zero(nc));
    out.report["kkt_residual"] = kkt_residual(built.spec, alpha, r.x, phi);
  } catch (const NonConvergenceError& e) {
    out.report["verdict"] = "non-convergence";
    out.report["x"] = vector_to_json(e.last_iterate());
    out.report["residual"] = e.residual();
    out.exit_code = kExitNonConvergence;
  }
  return out;
}

TaskOutcome run_certify(const BuiltGame& built, const json& t,
                        std::uint64_t seed, bool strict) {
  TaskOutcome out;
  CertifySampling sampling;
  sampling.n_samples = t.value("n_samples", 100);
  sampling.seed = seed;
  const Vector alpha = to_vector(t.at("alpha"), "task.alpha");
  const CertificateReport report = certify(built.spec, alpha, sampling);
  out.report["certificates"] = certificate_to_json(report);
  out.report["all_hold"] = report.all_hold();
  out.report["verdict"] = report.all_hold() ? "certified" : "conditions-failed";
  if (!report.all_hold() && strict) out.exit_code = kExitCertificateFailure;
  return out;
}

TaskOutcome run_design(const BuiltGame& built, const json& t) {
  TaskOutcome out;
  const Vector target = to_vector(t.at("target"), "task.target");
  const DesignResult r = design_price(built.spec, target);
  out.report["alpha"] = vector_to_json(r.alpha);
  out.report["feasible"] = r.feasible;
  out.report["sensitivities"] = vector_to_json(r.per_player_sensitivity);
  out.report["notes"] = r.notes;
  if (!r.feasible) {
    out.report["verdict"] = "infeasible-target";
    out.exit_code = kExitNonConvergence;
    return out;
  }
  const ActionVector x = ne_point(built.spec, r.alpha);
  const double err = (x - target).lpNorm<Eigen::Infinity>();
  out.report["achieved_x"] = vector_to_json(x);
  out.report["placement_error"] = err;
  out.report["verdict"] = err < 1e-6 ? "converged" : "placement-mismatch";
  if (err >= 1e-6) out.exit_code = kExitNonConvergence;
  return out;
}

TaskOutcome run_qos_design(const BuiltGame& built) {
  TaskOutcome out;
  const DesignResult r = wireless_qos_boundary_price(*built.wireless);
  const ActionVector x = wireless_ne(*built.wireless, r.alpha);
  Vector sirs(built.wireless->players());
  for (int i = 0; i < built.wireless->players(); ++i) {
    sirs[i] = sir(x, *built.wireless, i);
  }
  out.report["alpha"] = vector_to_json(r.alpha);
  out.report["x"] = vector_to_json(x);
  out.report["sir"] = vector_to_json(sirs);
  out.report["max_sir_error"] =
      (sirs - built.wireless->s_bar).lpNorm<Eigen::Infinity>();
  out.report["verdict"] = "converged";
  return out;
}

TaskOutcome run_regulate(const BuiltGame& built, const json& t) {
  TaskOutcome out;
  ControllerSpec spec;
  spec.target = to_vector(t.at("target"), "task.target");
  spec.mode = t.value("mode", std::string("proportional")) == "integral"
                  ? ControllerSpec::Mode::IntegralAugmented
                  : ControllerSpec::Mode::SteadyStatePlusGain;
  spec.lambda1 = to_vector(t.at("lambda1"), "task.lambda1");
  if (t.contains("lambda2")) {
    spec.lambda2 = to_vector(t["lambda2"], "task.lambda2");
  }
  const Vector x0 = to_vector(t.at("x0"), "task.x0");
  const double dt = t.at("dt").get<double>();
  const double T = t.at("T").get<double>();
  Vector disturbance;
  if (t.contains("disturbance")) {
    disturbance = to_vector(t["disturbance"], "task.disturbance");
  }
  try {
    RegulationResult r = regulate(built.spec, spec, x0, dt, T, disturbance,
                                  t.value("record_every", 100));
    out.report["final_error"] = r.final_error;
    out.report["steady_price"] = vector_to_json(r.steady_price);
    out.report["K"] = matrix_to_json(r.gains.K);
    if (r.gains.Ki.size() > 0) out.report["Ki"] = matrix_to_json(r.gains.Ki);
    out.report["max_real_eigenvalue"] = r.gains.max_real_eigenvalue;
    out.report["verdict"] = "converged";
    out.trajectory = std::move(r.trajectory);
  } catch (const DivergenceError& e) {
    out.report["verdict"] = "diverged";
    out.report["error"] = e.what();
    out.exit_code = kExitNonConvergence;
  }
  return out;
}

TaskOutcome run_price_loop(const BuiltGame& built, const json& t,
                           bool reproduce) {
  TaskOutcome out;
  const Vector alpha0 = to_vector(t.at("alpha0"), "task.alpha0");
  const TwoTimescaleConfig cfg = timescale_from_task(t);
  const bool settled = t.value("assume_settled", reproduce ? false : true);

  std::optional<Vector> x0;
  if (t.contains("x0")) x0 = to_vector(t["x0"], "task.x0");

  Trajectory traj = run_pricing_loop(built.spec, alpha0, cfg, settled,
                                     x0 ? &*x0 : nullptr);

  const Vector x_final = traj.x.back();
  const Vector alpha_final = traj.alpha.back();
  out.report["x_final"] = vector_to_json(x_final);
  out.report["alpha_final"] = vector_to_json(alpha_final);
  out.report["welfare_final"] = traj.welfare.back();
  out.report["clamped_prices"] = traj.clamped_prices;
  out.report["notes"] = traj.notes;

  const PriceOdeEval eval =
      price_ode_rhs(built.spec, alpha_final, cfg.h_source, cfg.inner_solver);
  const double stationarity = eval.alpha_dot.lpNorm<Eigen::Infinity>();
  out.report["price_stationarity"] = stationarity;

  const LyapunovReport monitor = lyapunov_monitor(
      traj, built.spec,
      settled ? LyapunovKind::WelfareSettled : LyapunovKind::WelfareFull);
  out.report["lyapunov_max_increment"] = monitor.max_increment;

  bool converged =
      stationarity <= 1e-6 * (1.0 + alpha_final.lpNorm<Eigen::Infinity>());
  if (reproduce) {
    // published two-channel equilibrium: powers in mW, prices, OSNR in dB
    const Vector x_pub = (Vector(2) << 0.0134, 0.0128).finished();
    const Vector a_pub = (Vector(2) << 73.4, 76.9).finished();
    const Vector osnr_db = metrics_db(built.spec, x_final);
    const double x_dev =
        ((x_final - x_pub).cwiseQuotient(x_pub)).lpNorm<Eigen::Infinity>();
    const double a_dev =
        ((alpha_final - a_pub).cwiseQuotient(a_pub)).lpNorm<Eigen::Infinity>();
    const double osnr_dev =
        (osnr_db.array() - 23.0).abs().maxCoeff();
    out.report["published_x"] = vector_to_json(x_pub);
    out.report["published_alpha"] = vector_to_json(a_pub);
    out.report["osnr_db"] = vector_to_json(osnr_db);
    out.report["x_rel_deviation"] = x_dev;
    out.report["alpha_rel_deviation"] = a_dev;
    out.report["osnr_db_deviation"] = osnr_dev;
    converged = x_dev <= 0.02 && a_dev <= 0.02 && osnr_dev <= 0.5;
  }
  out.report["verdict"] = converged ? "converged" : "non-convergence";
  if (!converged) out.exit_code = kExitNonConvergence;
  out.trajectory = std::move(traj);
  return out;
}

TaskOutcome run_penalty_loop(const BuiltGame& built, const json& t,
                             const json& g) {
  TaskOutcome out;
  const Vector alpha0 = to_vector(t.at("alpha0"), "task.alpha0");
  PenaltySpec spec;
  spec.s_bar = t.contains("s_bar") ? to_vector(t["s_bar"], "task.s_bar")
                                   : to_vector(g.at("s_bar"), "game.s_bar");
  const int iters = t.value("outer_iters", 200);

  Trajectory traj = run_penalty_loop(*built.wireless, alpha0, spec, iters,
                                     t.value("outer_step", 1.0),
                                     t.value("adapt_step", true));
  const Vector x_final = traj.x.back();
  Vector sirs(built.wireless->players());
  for (int i = 0; i < built.wireless->players(); ++i) {
    sirs[i] = sir(x_final, *built.wireless, i);
  }
  const double min_margin = (sirs - spec.s_bar).minCoeff();
  out.report["x_final"] = vector_to_json(x_final);
  out.report["alpha_final"] = vector_to_json(traj.alpha.back());
  out.report["sir_final"] = vector_to_json(sirs);
  out.report["min_sir_margin"] = min_margin;
  out.report["outer_samples"] = traj.rows();
  const bool reached = min_margin >= -1e-6;
  out.report["verdict"] = reached ? "qos-reached" : "non-convergence";
  if (!reached) out.exit_code = kExitNonConvergence;
  out.trajectory = std::move(traj);
  return out;
}

}  // namespace

BuiltGame build_game(const json& g) {
  const std::string kind = g.at("kind").get<std::string>();
  BuiltGame built;
  if (kind == "wireless") {
    WirelessSirGame game;
    game.h = to_vector(g.at("h"), "game.h");
    game.sigma2 = g.at("sigma2").get<double>();
    game.L = g.at("L").get<double>();
    game.beta = to_vector(g.at("beta"), "game.beta");
    if (g.contains("s_bar")) game.s_bar = to_vector(g["s_bar"], "game.s_bar");
    game.x_max = g.value("x_max", 100.0);
    built.spec = game.to_game_spec();
    built.wireless = game;
  } else if (kind == "osnr") {
    OpticalOsnrGame game;
    game.gamma = to_matrix(g.at("gamma"), "game.gamma");
    game.n0 = g.at("n0").get<double>();
    game.a = to_vector(g.at("a"), "game.a");
    game.beta = to_vector(g.at("beta"), "game.beta");
    game.with_linear_term = g.value("with_linear_term", true);
    game.x_max = g.value("x_max", 0.1);
    built.spec = game.to_game_spec();
    built.osnr = game;
  } else if (kind == "separable") {
    SeparableLogGame game;
    game.beta = to_vector(g.at("beta"), "game.beta");
    game.k = to_vector(g.at("k"), "game.k");
    const std::string pricing = g.value("pricing", std::string("linear-sum"));
    if (pricing == "quadratic-sum") {
      game.pricing_kind = SeparableLogGame::Pricing::QuadraticSum;
    } else if (pricing == "exp-sum") {
      game.pricing_kind = SeparableLogGame::Pricing::ExpSum;
    }
    game.x_min = g.value("x_min", 0.0);
    game.x_max = g.value("x_max", 50.0);
    built.spec = game.to_game_spec();
    built.separable = game;
  } else if (kind == "opaque") {
    // Named builtin behind the finite-difference-only interface.
    const Vector center = to_vector(g.at("center"), "game.center");
    const Vector weights = to_vector(g.at("weights"), "game.weights");
    const int n = static_cast<int>(center.size());
    auto utility = std::make_shared<OpaqueUtility>(
        n,
        [center, weights](int i, const Vector& x) {
          const double d = x[i] - center[i];
          return -weights[i] * d * d;
        },
        /*separable=*/true);
    std::shared_ptr<const PricingFamily> pricing;
    if (g.value("pricing", std::string("linear")) == "quadratic") {
      pricing = std::make_shared<QuadraticOwnPricing>();
    } else {
      pricing = std::make_shared<LinearOwnPricing>();
    }
    const double lo = g.value("x_min", -10.0);
    const double hi = g.value("x_max", 10.0);
    built.spec = make_game(n, utility, pricing,
                           ConstraintSet::box(Vector::Constant(n, lo),
                                              Vector::Constant(n, hi)));
  } else {
    throw DomainError("game.kind: unknown game '" + kind + "'");
  }
  return built;
}

std::vector<std::string> validate(const json& config) {
  std::vector<std::string> out;
  if (!config.is_object()) {
    out.push_back("config: expected a JSON object");
    return out;
  }
  if (!config.contains("game") || !config["game"].is_object()) {
    out.push_back("game: missing or not an object");
  }
  if (!config.contains("task") || !config["task"].is_object()) {
    out.push_back("task: missing or not an object");
  }
  if (!out.empty()) return out;

  auto game_diags = validate_game(config["game"]);
  out.insert(out.end(), game_diags.begin(), game_diags.end());
  auto task_diags = validate_task(config["task"], config["game"]);
  out.insert(out.end(), task_diags.begin(), task_diags.end());

  if (config.contains("seed") && !config["seed"].is_number_integer()) {
    out.push_back("seed: not an integer");
  }
  if (out.empty()) {
    // structural dry run: dimensions and domains
    try {
      build_game(config["game"]);
    } catch (const std::exception& e) {
      out.push_back(std::string("game: ") + e.what());
    }
  }
  return out;
}

RunArtifacts run_scenario(const json& config, const RunOptions& opts) {
  RunArtifacts artifacts;
  artifacts.diagnostics = validate(config);
  if (!artifacts.diagnostics.empty()) {
    artifacts.exit_code = kExitConfigError;
    return artifacts;
  }

  const std::uint64_t seed = opts.seed_override
                                 ? *opts.seed_override
                                 : config.value("seed", std::uint64_t{0});
  const json& t = config["task"];
  const std::string kind = t["kind"].get<std::string>();

  BuiltGame built = build_game(config["game"]);

  TaskOutcome outcome;
  try {
    if (opts.strict && kind != "certify") {
      Vector alpha_probe = Vector::Ones(built.spec.n_players);
      if (t.contains("alpha")) alpha_probe = to_vector(t["alpha"], "task.alpha");
      if (t.contains("alpha0")) alpha_probe = to_vector(t["alpha0"], "task.alpha0");
      CertifySampling sampling;
      sampling.seed = seed;
      const CertificateReport pre = certify(built.spec, alpha_probe, sampling);
      outcome.report["certificates"] = certificate_to_json(pre);
      if (!pre.all_hold()) {
        outcome.report["verdict"] = "certificate-failure";
        outcome.exit_code = kExitCertificateFailure;
      }
    }
    if (outcome.exit_code == kExitOk) {
      TaskOutcome task_outcome;
      if (kind == "solve") {
        task_outcome = run_solve(built, t);
      } else if (kind == "certify") {
        task_outcome = run_certify(built, t, seed, opts.strict);
      } else if (kind == "design") {
        task_outcome = run_design(built, t);
      } else if (kind == "qos-design") {
        task_outcome = run_qos_design(built);
      } else if (kind == "regulate") {
        task_outcome = run_regulate(built, t);
      } else if (kind == "price-loop") {
        task_outcome = run_price_loop(built, t, false);
      } else if (kind == "reproduce-sec6") {
        task_outcome = run_price_loop(built, t, true);
      } else if (kind == "penalty-loop") {
        task_outcome = run_penalty_loop(built, t, config["game"]);
      }
      for (auto& [key, value] : task_outcome.report.items()) {
        outcome.report[key] = value;
      }
      outcome.trajectory = std::move(task_outcome.trajectory);
      outcome.exit_code = task_outcome.exit_code;
    }
  } catch (const GameError& e) {
    outcome.report["verdict"] = "error";
    outcome.report["error"] = e.what();
    outcome.exit_code = kExitNonConvergence;
  }

  outcome.report["task"] = kind;
  outcome.report["seed"] = seed;

  artifacts.report = outcome.report;
  artifacts.manifest["tool"] = "gamedesign";
  artifacts.manifest["version"] = kToolVersion;
  artifacts.manifest["seed"] = seed;
  artifacts.manifest["config"] = config;

  if (opts.write_artifacts) {
    namespace fs = std::filesystem;
    fs::create_directories(opts.output_dir);
    if (outcome.trajectory) {
      outcome.trajectory->write_csv_file(
          (opts.output_dir / "trajectory.csv").string());
      artifacts.report["trajectory"] = "trajectory.csv";
    }
    std::ofstream report_out(opts.output_dir / "report.json");
    report_out << artifacts.report.dump(2) << "\n";
    std::ofstream manifest_out(opts.output_dir / "manifest.json");
    manifest_out << artifacts.manifest.dump(2) << "\n";
  }
  artifacts.exit_code = outcome.exit_code;
  return artifacts;
}

int run_config_directory(const std::filesystem::path& dir,
                         const RunOptions& opts) {
  namespace fs = std::filesystem;
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());

  std::vector<std::future<int>> futures;
  for (const auto& path : configs) {
    futures.push_back(std::async(std::launch::async, [path, &opts]() {
      std::ifstream in(path);
      json config;
      try {
        in >> config;
      } catch (const std::exception& e) {
        std::cerr << path.string() << ": " << e.what() << "\n";
        return kExitConfigError;
      }
      RunOptions local = opts;
      local.output_dir = opts.output_dir / path.stem();
      const RunArtifacts artifacts = run_scenario(config, local);
      for (const auto& d : artifacts.diagnostics) {
        std::cerr << path.string() << ": " << d << "\n";
      }
      return artifacts.exit_code;
    }));
  }
  int worst = kExitOk;
  for (auto& f : futures) worst = std::max(worst, f.get());
  return worst;
}

json reproduce_fixture() { return json::parse(kReproduceSec6Fixture); }

}  // namespace gamedesign
