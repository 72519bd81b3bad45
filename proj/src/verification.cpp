#include "blowup/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "blowup/errors.hpp"
#include "blowup/ode_blowup.hpp"
#include "blowup/physical_solver.hpp"

namespace blowup {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_diff(double x, double ref) {
  return std::abs(x - ref) / std::max(std::abs(ref), 1e-300);
}

SuiteResult open_suite(int id, const char* name, double budget) {
  SuiteResult r;
  r.id = id;
  r.name = name;
  r.budget_seconds = budget;
  return r;
}

// Finishes a suite: stamps runtime and fails it when the budget is exceeded.
SuiteResult finish(SuiteResult r, Clock::time_point start, bool ok, std::ostringstream& why) {
  if (r.seconds == 0.0) r.seconds = seconds_since(start);
  r.metrics["seconds"] = r.seconds;
  r.metrics["budget_seconds"] = r.budget_seconds;
  if (r.seconds > r.budget_seconds) {
    ok = false;
    why << "runtime " << r.seconds << " s exceeds budget " << r.budget_seconds << " s; ";
  }
  if (r.status != SuiteStatus::warn || !ok) r.status = ok ? SuiteStatus::pass : SuiteStatus::fail;
  r.message = why.str();
  if (r.message.empty()) r.message = "ok";
  return r;
}

// Central five-point derivative.
double derivative(const std::function<double(double)>& g, double x, double h) {
  return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h);
}

constexpr double kCorpusStart = 8.0;
constexpr double kCorpusSpan = 6.0;
constexpr int kCorpusNodes = 301;

EvolveOptions default_evolve() { return EvolveOptions{}; }

CorpusRun corpus_member(const std::string& label, const SimField& shape, const FunctionalConfig& cfg) {
  const EvolveOptions eo = default_evolve();
  const double reference = limit_amplitude(shape.params);
  const ThresholdResult th = tune_threshold(shape, shape.s + kCorpusSpan + 1.0, reference, eo, 1e-9);
  SimField w0 = shape;
  for (double& x : w0.values) x *= th.amplitude;
  CorpusRun run;
  run.label = label;
  run.params = shape.params;
  run.amplitude = th.amplitude;
  run.ledger = record_run(w0, shape.s + kCorpusSpan, cfg, eo);
  run.lyapunov = lyapunov_audit(run.ledger);
  run.bounds = boundedness_audit(run.ledger);
  return run;
}

}  // namespace

std::string to_string(SuiteStatus status) {
  switch (status) {
    case SuiteStatus::pass: return "pass";
    case SuiteStatus::warn: return "warn";
    case SuiteStatus::fail: return "fail";
  }
  return "fail";
}

SimField random_smooth_datum(const Mesh& mesh, double s0, const Params& params, std::uint64_t seed,
                             int index) {
  std::mt19937_64 rng(seed);
  rng.discard(static_cast<unsigned long long>(index) * 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double c[3], m[3], sigma[3];
  for (int k = 0; k < 3; ++k) {
    c[k] = 0.3 + 0.7 * unit(rng);
    m[k] = unit(rng);
    sigma[k] = 1.5 + 1.5 * unit(rng);
  }
  SimField field{mesh, std::vector<double>(mesh.nodes), s0, params};
  double peak = 0.0;
  for (std::size_t i = 0; i < mesh.nodes; ++i) {
    const double y = mesh.coordinate(i);
    double v = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double q = 2.0 * sigma[k] * sigma[k];
      v += 0.5 * c[k] * (std::exp(-(y - m[k]) * (y - m[k]) / q) + std::exp(-(y + m[k]) * (y + m[k]) / q));
    }
    field.values[i] = v;
    peak = std::max(peak, v);
  }
  const double scale = limit_amplitude(params) / peak;
  for (double& v : field.values) v *= scale;
  return field;
}

SimField near_profile_datum(const Mesh& mesh, double s0, const Params& params) {
  const double kappa = limit_amplitude(params);
  const double root = std::sqrt(s0);
  SimField field{mesh, std::vector<double>(mesh.nodes), s0, params};
  for (std::size_t i = 0; i < mesh.nodes; ++i) {
    field.values[i] = kappa * blowup_profile(mesh.coordinate(i) / root, params);
  }
  return field;
}

std::vector<CorpusRun> lyapunov_corpus(const VerifyOptions& options) {
  validate(options.functionals);
  const Mesh mesh = make_mesh(Geometry::line, 1, kDefaultTruncationRadius, kCorpusNodes);
  struct Job {
    std::string label;
    SimField shape;
  };
  std::vector<Job> jobs;
  for (double a : {1.0, -1.0}) {
    const Params params = make_params(3.0, a, 1);
    std::ostringstream tag;
    tag << "p=3,a=" << a;
    for (int k = 0; k < options.corpus_size; ++k) {
      jobs.push_back({tag.str() + ",random#" + std::to_string(k),
                      random_smooth_datum(mesh, kCorpusStart, params, options.seed, k)});
    }
    jobs.push_back({tag.str() + ",near-profile", near_profile_datum(mesh, kCorpusStart, params)});
  }
  std::vector<CorpusRun> runs;
  if (options.parallel) {
    std::vector<std::future<CorpusRun>> futures;
    for (const auto& job : jobs) {
      futures.push_back(std::async(std::launch::async, corpus_member, job.label, job.shape,
                                   options.functionals));
    }
    for (auto& f : futures) runs.push_back(f.get());
  } else {
    for (const auto& job : jobs) runs.push_back(corpus_member(job.label, job.shape, options.functionals));
  }
  return runs;
}

SuiteResult suite_ode_amplitude() {
  const auto start = Clock::now();
  SuiteResult r = open_suite(1, "ode_amplitude", 5.0);
  std::ostringstream why;
  bool ok = true;
  nlohmann::json cases = nlohmann::json::array();
  const std::pair<double, double> grid[] = {{3, 0}, {3, 1}, {3, -1}, {2, 2}};
  for (const auto& [p, a] : grid) {
    const Params params = make_params(p, a, 1);
    const ScalingConstants k = scaling_constants(params);
    OdeOptions opts;
    opts.sample_ds = 0.1;
    const auto ratios = asymptotic_ratio(integrate_vT(params, 1.0, 30.0, opts), params);
    double dev30 = NAN, limit_dev30 = NAN, prev = INFINITY;
    bool decreasing = true;
    double max_rise = 0.0;
    for (const auto& rs : ratios) {
      if (rs.s < 15.0 - 1e-9) continue;
      const double dev = std::abs(rs.ratio / k.kappa_a - 1.0);
      if (dev > prev + 1e-9) {
        decreasing = false;
        max_rise = std::max(max_rise, dev - prev);
      }
      prev = dev;
      if (std::abs(rs.s - 30.0) < 1e-9) {
        dev30 = dev;
        limit_dev30 = std::abs(rs.ratio / k.limit_amplitude - 1.0);
        cases.push_back({{"p", p}, {"a", a}, {"ratio_s30", rs.ratio}, {"kappa_a", k.kappa_a},
                         {"deviation_s30", dev}, {"limit_amplitude", k.limit_amplitude},
                         {"limit_deviation_s30", limit_dev30}});
      }
    }
    cases.back()["deviation_decreasing"] = decreasing;
    cases.back()["max_deviation_rise"] = max_rise;
    std::ostringstream tag;
    tag << "(p=" << p << ",a=" << a << ")";
    if (!(dev30 <= 0.15)) {
      ok = false;
      why << tag.str() << " |ratio/kappa_a-1| = " << dev30 << " at s=30; ";
    }
    if (!decreasing) {
      ok = false;
      why << tag.str() << " deviation not decreasing on [15,30]; ";
    }
    if (a == 0.0 && !(dev30 <= 1e-6)) {
      ok = false;
      why << tag.str() << " closed form missed by " << dev30 << "; ";
    }
  }
  r.metrics["cases"] = cases;
  return finish(std::move(r), start, ok, why);
}

SuiteResult suite_primitive_estimates() {
  const auto start = Clock::now();
  SuiteResult r = open_suite(2, "primitive_estimates", 5.0);
  std::ostringstream why;
  bool ok = true;
  double worst_derivative = 0.0, worst_split = 0.0, worst_identity = 0.0, worst_ratio_gap = 0.0;
  bool finite_700 = true;
  for (double p : {2.0, 3.0}) {
    for (double a : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const Params params = make_params(p, a, 1);
      const auto F = [&](double u) { return eval_F(u, params); };
      for (double u : {-7.0, -0.8, 0.3, 1.0, 2.5, 40.0, 1e3}) {
        const double d = derivative(F, u, 1e-3 * std::abs(u));
        worst_derivative = std::max(worst_derivative, rel_diff(d, eval_f(u, params)));
      }
      const double big = 1e8;
      worst_ratio_gap = std::max(worst_ratio_gap,
                                 std::abs((p + 1) * eval_F(big, params) / (big * eval_f(big, params)) - 1.0));
      for (double x : {0.1, 1.0, 3.0, 1e2, 1e5, 1e8}) {
        const double split = x * eval_f(x, params) / (p + 1) + eval_F1(x, params) + eval_F2(x, params);
        worst_split = std::max(worst_split, rel_diff(split, eval_F(x, params)));
      }
      for (double s : {1.0, 2.0, 5.0, 10.0, 25.0, 50.0}) {
        const double ph = phi(s, params);
        for (double w : {-10.0, -1.3, -0.2, 0.05, 0.7, 1.0, 4.0, 10.0}) {
          const double x = ph * w;
          const double literal =
              std::exp(-(p + 1) * s / (p - 1)) * std::pow(s, 2 * a / (p - 1)) * x * eval_f(x, params);
          worst_identity = std::max(worst_identity, rel_diff(w * rescaled_nonlinearity(s, w, params), literal));
        }
      }
      for (double w : {-10.0, 0.5, 1.0, 10.0}) {
        if (!std::isfinite(rescaled_nonlinearity(700.0, w, params)) ||
            !std::isfinite(weighted_F(700.0, w, params)) || !std::isfinite(log_term(700.0, w, params))) {
          finite_700 = false;
        }
      }
    }
  }
  r.metrics = {{"derivative_rel_err", worst_derivative}, {"ratio_gap_at_1e8", worst_ratio_gap},
               {"split_rel_err", worst_split}, {"rescaled_identity_rel_err", worst_identity},
               {"finite_at_s700", finite_700}};
  if (!(worst_derivative <= 1e-6)) { ok = false; why << "F' = f off by " << worst_derivative << "; "; }
  if (!(worst_ratio_gap <= 0.05)) { ok = false; why << "(p+1)F/(uf) off by " << worst_ratio_gap << "; "; }
  if (!(worst_split <= 1e-9)) { ok = false; why << "F split off by " << worst_split << "; "; }
  if (!(worst_identity <= 1e-9)) { ok = false; why << "rescaled identity off by " << worst_identity << "; "; }
  if (!finite_700) { ok = false; why << "non-finite values at s = 700; "; }
  return finish(std::move(r), start, ok, why);
}

SuiteResult suite_quadrature() {
  const auto start = Clock::now();
  SuiteResult r = open_suite(3, "quadrature", 1.0);
  std::ostringstream why;
  bool ok = true;
  nlohmann::json cases = nlohmann::json::array();
  for (int N : {1, 2, 3}) {
    const QuadratureRule rule = build_rule(N, N == 1 ? QuadratureMode::line : QuadratureMode::radial, 401);
    const double mass = gaussian_mass(N);
    const double errs[3] = {
        rel_diff(integrate(rule, [](double) { return 1.0; }), mass),
        rel_diff(integrate(rule, [](double y) { return y * y; }), 2.0 * N * mass),
        rel_diff(integrate(rule, [](double y) { return y * y * y * y; }), 4.0 * N * (N + 2) * mass)};
    cases.push_back({{"N", N}, {"mass", errs[0]}, {"second_moment", errs[1]}, {"fourth_moment", errs[2]}});
    for (double e : errs) {
      if (!(e <= 1e-8)) {
        ok = false;
        why << "N=" << N << " moment error " << e << "; ";
      }
    }
  }
  r.metrics["cases"] = cases;
  return finish(std::move(r), start, ok, why);
}

SuiteResult suite_lyapunov(const std::vector<CorpusRun>& corpus, double corpus_seconds) {
  const auto start = Clock::now();
  SuiteResult r = open_suite(4, "lyapunov", 120.0);
  std::ostringstream why;
  bool ok = !corpus.empty();
  if (corpus.empty()) why << "empty corpus; ";
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : corpus) {
    const auto& rep = run.lyapunov;
    nlohmann::json entry = {{"label", run.label}, {"amplitude", run.amplitude},
                            {"windows", rep.windows_checked}, {"violations", rep.violations.size()},
                            {"max_unit_margin", rep.max_unit_margin},
                            {"max_step_increase", rep.max_step_increase}};
    if (!rep.violations.empty()) {
      const auto& v = rep.violations.front();
      entry["first_violation"] = {{"kind", v.kind}, {"s", v.s}, {"magnitude", v.magnitude}};
    }
    runs.push_back(entry);
    if (!rep.passed) {
      ok = false;
      why << run.label << ": " << rep.violations.size() << " violations; ";
    }
  }
  r.metrics["runs"] = runs;
  r.seconds = corpus_seconds + seconds_since(start);
  return finish(std::move(r), start, ok, why);
}

SuiteResult suite_rate_recovery() {
  const auto start = Clock::now();
  SuiteResult r = open_suite(5, "rate_recovery", 300.0);
  std::ostringstream why;
  bool ok = true;

  // Exact model first: the fit must recover it to round-off.
  {
    const double alpha = 0.5, beta = 0.3, log_kappa = -0.2, T = 1.0;
    std::vector<SupSample> history;
    for (int k = 0; k <= 400; ++k) {
      const double tau = std::pow(10.0, -1.0 - 7.5 * k / 400.0);
      const double s = -std::log(tau);
      history.push_back({T - tau, std::exp(log_kappa + alpha * s - beta * std::log(s))});
    }
    const RateFit fit = fit_rate(history, T);
    r.metrics["synthetic"] = {{"residual", fit.residual}, {"alpha_hat", fit.alpha_hat},
                              {"beta_hat", fit.beta_hat}, {"samples", fit.samples}};
    if (!(fit.residual <= 1e-10)) {
      ok = false;
      why << "synthetic residual " << fit.residual << "; ";
    }
  }

  nlohmann::json cases = nlohmann::json::array();
  for (double a : {1.0, -1.0}) {
    const Params params = make_params(3.0, a, 1);
    const Mesh mesh = make_mesh(Geometry::line, 1, 2.0, 201);
    const GridField u0 = sample_field(mesh, [](double x) { return 1.0 + 0.01 * std::exp(-4.0 * x * x); });
    PhysicalRunOptions opts;
    opts.M_stop = 1e8;
    opts.dt_safety = 0.05;
    opts.dt_max = 0.02;
    const PhysicalRunResult run = run_to_blowup(u0, params, opts);
    std::ostringstream tag;
    tag << "a=" << a;
    if (run.status != RunStatus::blowup) {
      ok = false;
      why << tag.str() << " did not blow up; ";
      continue;
    }
    RateFitOptions fo;
    fo.T_perturbation = run.last_dt;
    const RateFit fit = fit_rate(run.sup_history, run.T_hat, fo);
    const double alpha_ref = 1.0 / (params.p - 1.0);
    const double beta_ref = a / (params.p - 1.0);
    const double alpha_err = rel_diff(fit.alpha_hat, alpha_ref);
    const double beta_err = rel_diff(fit.beta_hat, beta_ref);
    cases.push_back({{"a", a}, {"T_hat", run.T_hat}, {"alpha_hat", fit.alpha_hat},
                     {"alpha_band", {fit.alpha_lo, fit.alpha_hi}}, {"alpha_rel_err", alpha_err},
                     {"beta_hat", fit.beta_hat}, {"beta_band", {fit.beta_lo, fit.beta_hi}},
                     {"beta_rel_err", beta_err}, {"residual", fit.residual}, {"samples", fit.samples},
                     {"s_window", {fit.s_lo, fit.s_hi}}});
    if (!(alpha_err <= 0.05)) { ok = false; why << tag.str() << " alpha off by " << alpha_err << "; "; }
    if (!(beta_err <= 0.25)) { ok = false; why << tag.str() << " beta off by " << beta_err << "; "; }
  }
  r.metrics["runs"] = cases;
  return finish(std::move(r), start, ok, why);
}

SuiteResult suite_boundedness(const std::vector<CorpusRun>& corpus) {
  const auto start = Clock::now();
  SuiteResult r = open_suite(6, "boundedness", 120.0);
  std::ostringstream why;
  bool ok = !corpus.empty();
  if (corpus.empty()) why << "empty corpus; ";
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : corpus) {
    const auto& b = run.bounds;
    runs.push_back({{"label", run.label}, {"min_N", b.min_N}, {"max_abs_L", b.max_abs_L},
                    {"L_reference", b.L_reference}, {"max_mass_ratio", b.max_mass_ratio},
                    {"N_bounded", b.N_bounded}, {"L_bounded", b.L_bounded}, {"mass_bounded", b.mass_bounded}});
    if (!b.passed()) {
      ok = false;
      why << run.label << ": bounds violated; ";
    }
  }
  r.metrics["runs"] = runs;
  return finish(std::move(r), start, ok, why);
}

SuiteResult suite_profile(const VerifyOptions& options) {
  const auto start = Clock::now();
  SuiteResult r = open_suite(7, "profile", 120.0);
  std::ostringstream why;
  bool ok = true;
  const Params params = make_params(3.0, 1.0, 1);
  const double s0 = similarity_start(1.0);
  const double s_check = s0 + 10.0;
  const Mesh mesh = make_mesh(Geometry::line, 1, kDefaultTruncationRadius, 401);
  const double kappa = limit_amplitude(params);
  const double amplitude = ode_ratio_at(s_check, params);

  auto measure = [&](const SimField& shape) {
    const EvolveOptions eo = default_evolve();
    const ThresholdResult th = tune_threshold(shape, s0 + 12.0, kappa, eo);
    SimField w0 = shape;
    for (double& x : w0.values) x *= th.amplitude;
    const SimField end = evolve(w0, s_check, eo);
    const ProfileReport rep = profile_error(end, 1.0, amplitude);
    return nlohmann::json{{"threshold_amplitude", th.amplitude}, {"s", end.s}, {"sup_error", rep.sup_error},
                          {"nodes", rep.nodes}, {"w_at_origin", end.values[mesh.nodes / 2]},
                          {"sup_error_vs_limit_amplitude", profile_error(end, 1.0, kappa).sup_error},
                          {"sup_error_vs_kappa_a", profile_error(end, 1.0, kappa_a(params)).sup_error}};
  };

  const nlohmann::json near = measure(near_profile_datum(mesh, s0, params));
  const nlohmann::json generic = measure(random_smooth_datum(mesh, s0, params, options.seed, 0));
  r.metrics = {{"amplitude", amplitude}, {"near_profile", near}, {"generic", generic}};
  if (!(near["sup_error"].get<double>() <= 0.15)) {
    ok = false;
    why << "near-profile sup error " << near["sup_error"].get<double>() << "; ";
  }
  if (!(generic["sup_error"].get<double>() <= 0.15)) {
    r.status = SuiteStatus::warn;
    why << "generic datum sup error " << generic["sup_error"].get<double>() << " (recorded only); ";
  }
  return finish(std::move(r), start, ok, why);
}

SuiteResult suite_frame_equivalence(const VerifyOptions& options) {
  const auto start = Clock::now();
  SuiteResult r = open_suite(8, "frame_equivalence", 60.0);
  std::ostringstream why;
  bool ok = true;
  const double T = 1.0;
  const double s0 = similarity_start(T);
  const Mesh ymesh = make_mesh(Geometry::line, 1, kDefaultTruncationRadius, 401);
  // Physical window that maps exactly onto the similarity mesh at s0.
  const Mesh xmesh = make_mesh(Geometry::line, 1, kDefaultTruncationRadius * std::exp(-s0 / 2.0), 801);
  nlohmann::json cases = nlohmann::json::array();
  for (double a : {1.0, -1.0}) {
    const Params params = make_params(3.0, a, 1);
    SimField gauss{ymesh, std::vector<double>(ymesh.nodes), s0, params};
    for (std::size_t i = 0; i < ymesh.nodes; ++i) {
      const double y = ymesh.coordinate(i);
      gauss.values[i] = limit_amplitude(params) * std::exp(-y * y / 8.0);
    }
    SimField random = random_smooth_datum(ymesh, s0, params, options.seed, 1);
    for (double& v : random.values) v *= 0.8;
    for (const auto& [label, w0] : {std::pair{"gaussian", gauss}, std::pair{"random", random}}) {
      const SimField native = evolve(w0, s0 + 1.0);
      const GridField u0 = from_similarity(w0, 0.0, T, xmesh);
      const GridField u1 = advance_to(u0, params, T - std::exp(-(s0 + 1.0)), 1e-4);
      const SimField mapped = to_similarity(u1, 0.0, T, params, ymesh);
      double diff = 0.0;
      for (std::size_t i = 0; i < ymesh.nodes; ++i) {
        diff = std::max(diff, std::abs(native.values[i] - mapped.values[i]));
      }
      cases.push_back({{"a", a}, {"datum", label}, {"sup_difference", diff}});
      if (!(diff <= 5e-3)) {
        ok = false;
        why << "a=" << a << " " << label << " differs by " << diff << "; ";
      }
    }
  }
  r.metrics["cases"] = cases;
  return finish(std::move(r), start, ok, why);
}

std::vector<SuiteResult> run_all_suites(const VerifyOptions& options) {
  std::vector<SuiteResult> out;
  auto guarded = [&](int id, const char* name, auto&& body) {
    const auto start = Clock::now();
    try {
      out.push_back(body());
    } catch (const std::exception& e) {
      SuiteResult r = open_suite(id, name, 0.0);
      r.message = std::string("error: ") + e.what();
      r.seconds = seconds_since(start);
      out.push_back(std::move(r));
    }
  };
  guarded(1, "ode_amplitude", [] { return suite_ode_amplitude(); });
  guarded(2, "primitive_estimates", [] { return suite_primitive_estimates(); });
  guarded(3, "quadrature", [] { return suite_quadrature(); });

  std::vector<CorpusRun> corpus;
  double corpus_seconds = 0.0;
  std::string corpus_error;
  {
    const auto start = Clock::now();
    try {
      corpus = lyapunov_corpus(options);
    } catch (const std::exception& e) {
      corpus_error = e.what();
    }
    corpus_seconds = seconds_since(start);
  }
  guarded(4, "lyapunov", [&] {
    if (!corpus_error.empty()) throw NumericError(corpus_error);
    return suite_lyapunov(corpus, corpus_seconds);
  });
  guarded(5, "rate_recovery", [] { return suite_rate_recovery(); });
  guarded(6, "boundedness", [&] {
    if (!corpus_error.empty()) throw NumericError(corpus_error);
    return suite_boundedness(corpus);
  });
  guarded(7, "profile", [&] { return suite_profile(options); });
  guarded(8, "frame_equivalence", [&] { return suite_frame_equivalence(options); });
  return out;
}

nlohmann::json to_json(const SuiteResult& result) {
  return {{"id", result.id}, {"name", result.name}, {"status", to_string(result.status)},
          {"message", result.message}, {"seconds", result.seconds}, {"metrics", result.metrics}};
}

}  // namespace blowup
