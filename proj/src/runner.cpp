#include "blowup/runner.hpp"

#include <boost/version.hpp>

#include <chrono>
#include <cmath>

#include "blowup/analysis.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/ode_blowup.hpp"
#include "blowup/verification.hpp"

namespace blowup {
namespace {

Mesh configured_mesh(const RunConfig& c) {
  return make_mesh(c.grid.geometry, c.params.N, c.grid.extent, static_cast<std::size_t>(c.grid.resolution));
}

// Linear interpolation of a two-column (coordinate, value) table.
std::vector<double> from_file(const std::string& path, const Mesh& mesh) {
  const CsvTable t = read_csv(path);
  if (t.header.size() != 2 || t.rows.size() < 2) {
    throw ConfigError(path + ": expected two columns (coordinate, value) and at least two rows");
  }
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    if (!(t.rows[k][0] > t.rows[k - 1][0])) throw ConfigError(path + ": coordinates must increase");
  }
  std::vector<double> out(mesh.nodes);
  for (std::size_t i = 0; i < mesh.nodes; ++i) {
    const double x = mesh.coordinate(i);
    if (x < t.rows.front()[0] - 1e-12 || x > t.rows.back()[0] + 1e-12) {
      throw ConfigError(path + ": does not cover coordinate " + format_double(x));
    }
    std::size_t k = 1;
    while (k + 1 < t.rows.size() && t.rows[k][0] < x) ++k;
    const double x0 = t.rows[k - 1][0], x1 = t.rows[k][0];
    const double th = std::clamp((x - x0) / (x1 - x0), 0.0, 1.0);
    out[i] = (1.0 - th) * t.rows[k - 1][1] + th * t.rows[k][1];
  }
  return out;
}

double gaussian(const InitialSpec& spec, double x) {
  return spec.amplitude * std::exp(-x * x / (2.0 * spec.width * spec.width));
}

nlohmann::json versions() {
  return {{"program", kProgramVersion}, {"compiler", __VERSION__}, {"boost", BOOST_LIB_VERSION}};
}

CsvTable ledger_table(const RunLedger& ledger, const std::vector<double>& sups) {
  CsvTable t{{"s", "mass", "E", "J", "H", "N", "I", "L0", "L", "E_psi", "I_psi", "dissipation", "sup"}, {}};
  for (std::size_t i = 0; i < ledger.snapshots.size(); ++i) {
    const auto& q = ledger.snapshots[i];
    t.rows.push_back({q.s, q.mass, q.E, q.J, q.H, q.N, q.I, q.L0, q.L, q.E_psi, q.I_psi,
                      ledger.cumulative_dissipation[i], sups[i]});
  }
  return t;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

int run_ode(const RunConfig& c, const std::filesystem::path& dir, nlohmann::json& results) {
  OdeOptions opts;
  opts.rel_tol = c.solver.rel_tol;
  const OdeTrajectory traj = integrate_vT(c.params, c.solver.T, c.solver.s_max, opts);
  const auto ratios = asymptotic_ratio(traj, c.params);
  CsvTable t{{"s", "tau", "t", "v", "psi", "ratio"}, {}};
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& q = traj.samples[i];
    t.rows.push_back({q.s, q.tau, q.t, q.v, psi_of_tau(q.tau, c.params), ratios[i].ratio});
  }
  write_csv(dir / "trajectory.csv", t);
  const ScalingConstants k = scaling_constants(c.params);
  results = {{"samples", traj.samples.size()}, {"kappa_a", k.kappa_a}, {"limit_amplitude", k.limit_amplitude}};
  if (!ratios.empty()) {
    results["final_s"] = ratios.back().s;
    results["final_ratio"] = ratios.back().ratio;
  }
  return 0;
}

int run_physical(const RunConfig& c, const std::filesystem::path& dir, nlohmann::json& results) {
  const GridField u0 = physical_initial(c);
  PhysicalRunOptions opts;
  opts.M_stop = c.solver.M_stop;
  opts.dt_safety = c.solver.dt_safety;
  opts.dt_max = c.solver.dt_max;
  opts.t_max = c.solver.t_max;
  CsvTable history{{"t", "sup"}, {}};
  history.rows.push_back({u0.time, sup_abs(u0.values)});
  opts.observer = [&](const GridField& u) { history.rows.push_back({u.time, sup_abs(u.values)}); };
  PhysicalRunResult r;
  try {
    r = run_to_blowup(u0, c.params, opts);
  } catch (...) {
    write_csv(dir / "sup_history.csv", history);
    throw;
  }
  write_csv(dir / "sup_history.csv", history);
  CsvTable field{{"x", "u"}, {}};
  for (std::size_t i = 0; i < r.final_field.mesh.nodes; ++i) {
    field.rows.push_back({r.final_field.mesh.coordinate(i), r.final_field.values[i]});
  }
  write_csv(dir / "final_field.csv", field);
  results = {{"status", to_string(r.status)}, {"steps", r.sup_history.size()}, {"t_final", r.final_field.time},
             {"sup_final", sup_abs(r.final_field.values)}, {"last_dt", r.last_dt}};
  if (r.status == RunStatus::blowup) {
    results["T_hat"] = r.T_hat;
    results["x0_hat"] = r.x0_hat;
    try {
      RateFitOptions fo;
      fo.T_perturbation = r.last_dt;
      const RateFit fit = fit_rate(r.sup_history, r.T_hat, fo);
      results["rate_fit"] = {{"alpha_hat", fit.alpha_hat}, {"beta_hat", fit.beta_hat},
                             {"log_kappa_hat", fit.log_kappa_hat}, {"residual", fit.residual},
                             {"samples", fit.samples}, {"alpha_band", {fit.alpha_lo, fit.alpha_hi}},
                             {"beta_band", {fit.beta_lo, fit.beta_hi}}};
    } catch (const Error& e) {
      results["rate_fit_error"] = e.what();
    }
  }
  return 0;
}

int run_similarity(const RunConfig& c, const std::filesystem::path& dir, nlohmann::json& results) {
  const SimField w0 = similarity_initial(c);
  const QuadratureRule rule = rule_for(w0.mesh);
  RunLedger ledger;
  std::vector<double> sups{sup_abs(w0.values)};
  ledger.snapshots.push_back(snapshot(w0, rule, c.functional));
  ledger.cumulative_dissipation.push_back(0.0);
  EvolveOptions eo;
  eo.ds = c.solver.ds;
  eo.on_step = [&](const SimField& before, const SimField& after) {
    const double d = ds_dissipation(before, after, rule) * (after.s - before.s);
    ledger.cumulative_dissipation.push_back(ledger.cumulative_dissipation.back() + d);
    ledger.snapshots.push_back(snapshot(after, rule, c.functional));
    sups.push_back(sup_abs(after.values));
  };
  SimField end;
  try {
    end = evolve(w0, w0.s + c.solver.s_span, eo);
  } catch (...) {
    write_csv(dir / "functionals.csv", ledger_table(ledger, sups));
    throw;
  }
  write_csv(dir / "functionals.csv", ledger_table(ledger, sups));
  CsvTable field{{"y", "w"}, {}};
  for (std::size_t i = 0; i < end.mesh.nodes; ++i) field.rows.push_back({end.mesh.coordinate(i), end.values[i]});
  write_csv(dir / "final_field.csv", field);
  results = {{"s0", w0.s}, {"s_final", end.s}, {"sup_final", sup_abs(end.values)},
             {"escaped", end.s < w0.s + c.solver.s_span - 1e-9}, {"snapshots", ledger.snapshots.size()}};
  if (ledger.snapshots.back().s - ledger.snapshots.front().s >= 3.0 - 1e-9) {
    const LyapunovReport lr = lyapunov_audit(ledger);
    results["lyapunov"] = {{"passed", lr.passed}, {"violations", lr.violations.size()},
                           {"max_unit_margin", lr.max_unit_margin}, {"max_step_increase", lr.max_step_increase}};
    const BoundednessReport br = boundedness_audit(ledger);
    results["boundedness"] = {{"passed", br.passed()}, {"min_N", br.min_N}, {"max_abs_L", br.max_abs_L},
                              {"L_reference", br.L_reference}, {"max_mass_ratio", br.max_mass_ratio}};
  }
  return 0;
}

int run_verify(const RunConfig& c, nlohmann::json& results) {
  VerifyOptions opts;
  opts.seed = c.seed;
  opts.functionals = c.functional;
  const auto suites = run_all_suites(opts);
  results = nlohmann::json::array();
  int code = 0;
  for (const auto& s : suites) {
    results.push_back(to_json(s));
    if (s.status == SuiteStatus::fail) code = 1;
  }
  return code;
}

}  // namespace

GridField physical_initial(const RunConfig& c) {
  const Mesh mesh = configured_mesh(c);
  const InitialSpec& spec = c.initial;
  switch (spec.kind) {
    case InitialKind::constant:
      return sample_field(mesh, [&](double) { return spec.c; });
    case InitialKind::gaussian:
      return sample_field(mesh, [&](double x) { return gaussian(spec, x); });
    case InitialKind::profile: {
      const double T = c.solver.T;
      if (!(T <= std::exp(-1.0))) throw ConfigError("profile datum needs solver.T <= 1/e");
      const double s0 = -std::log(T);
      const double scale = spec.amplitude * limit_amplitude(c.params) * psi_of_tau(T, c.params);
      return sample_field(mesh, [&](double x) {
        return scale * blowup_profile(x / std::sqrt(T * s0), c.params);
      });
    }
    case InitialKind::file:
      return GridField{mesh, from_file(spec.path, mesh), 0.0};
  }
  throw ConfigError("unknown initial kind");
}

SimField similarity_initial(const RunConfig& c) {
  const Mesh mesh = configured_mesh(c);
  const InitialSpec& spec = c.initial;
  const double s0 = similarity_start(c.solver.T);
  SimField w{mesh, std::vector<double>(mesh.nodes), s0, c.params};
  switch (spec.kind) {
    case InitialKind::constant:
      for (double& v : w.values) v = spec.c;
      break;
    case InitialKind::gaussian:
      for (std::size_t i = 0; i < mesh.nodes; ++i) w.values[i] = gaussian(spec, mesh.coordinate(i));
      break;
    case InitialKind::profile: {
      const double kappa = limit_amplitude(c.params);
      for (std::size_t i = 0; i < mesh.nodes; ++i) {
        w.values[i] = spec.amplitude * kappa * blowup_profile(mesh.coordinate(i) / std::sqrt(s0), c.params);
      }
      break;
    }
    case InitialKind::file:
      w.values = from_file(spec.path, mesh);
      break;
  }
  return w;
}

RunOutcome run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  out.directory = resolve_output(config.output);
  std::filesystem::create_directories(out.directory);
  nlohmann::json results;
  std::string error;
  try {
    switch (config.scenario) {
      case Scenario::ode: out.exit_code = run_ode(config, out.directory, results); break;
      case Scenario::physical: out.exit_code = run_physical(config, out.directory, results); break;
      case Scenario::similarity: out.exit_code = run_similarity(config, out.directory, results); break;
      case Scenario::verify: out.exit_code = run_verify(config, results); break;
    }
  } catch (const std::exception& e) {
    out.exit_code = 2;
    error = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report = {{"schema_version", kSchemaVersion},
                {"scenario", to_string(config.scenario)},
                {"config", to_json(config)},
                {"versions", versions()},
                {"status", out.exit_code == 0 ? "ok" : out.exit_code == 1 ? "failed" : "error"},
                {"wall_time_seconds", wall}};
  out.report[config.scenario == Scenario::verify ? "suites" : "results"] = results;
  if (!error.empty()) out.report["error"] = error;
  write_json(out.directory / "report.json", out.report);
  return out;
}

}  // namespace blowup
