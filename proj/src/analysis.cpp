#include "blowup/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blowup {

namespace {

struct LinearFit {
  Eigen::Vector3d coef;
  double rms;
};

LinearFit solve_fit(std::span<const SupSample> window, double T_hat) {
  const auto n = static_cast<Eigen::Index>(window.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& sample = window[static_cast<std::size_t>(i)];
    const double tau = T_hat - sample.t;
    if (!(tau > 0.0) || !(sample.sup > 0.0)) {
      throw DomainError("fit_rate: samples must satisfy t < T_hat and M > 0");
    }
    const double s = -std::log(tau);
    X(i, 0) = s;
    X(i, 1) = -std::log(s);
    X(i, 2) = 1.0;
    y(i) = std::log(sample.sup);
  }
  // Column scaling keeps the rank test meaningful.
  const Eigen::Vector3d scale = X.colwise().norm().transpose();
  for (int j = 0; j < 3; ++j) X.col(j) /= scale(j);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw FitError("fit_rate: collinear design (log s does not vary across the window)");
  const Eigen::Vector3d scaled = qr.solve(y);
  const Eigen::VectorXd r = X * scaled - y;
  return {scaled.cwiseQuotient(scale), std::sqrt(r.squaredNorm() / static_cast<double>(n))};
}

std::vector<SupSample> select_window(std::span<const SupSample> history, double T_hat,
                                     const RateFitOptions& options) {
  std::vector<SupSample> in_range;
  for (const auto& sample : history) {
    const double tau = T_hat - sample.t;
    if (tau >= options.tau_min && tau <= options.tau_max) in_range.push_back(sample);
  }
  const auto keep = static_cast<std::size_t>(
      std::ceil(options.window_fraction * static_cast<double>(in_range.size())));
  std::vector<SupSample> window(in_range.end() - static_cast<long>(keep), in_range.end());
  if (window.size() < options.min_samples) {
    std::ostringstream os;
    os << "fit_rate: " << window.size() << " samples in the window, need " << options.min_samples;
    throw FitError(os.str());
  }
  return window;
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<long>(mid)));
  }
  return m;
}

}  // namespace

RateFit fit_rate(std::span<const SupSample> history, double T_hat, const RateFitOptions& options) {
  // t == T_hat happens when T_hat - t is below the resolution of t; such samples never
  // enter the window.
  for (const auto& sample : history) {
    if (sample.t > T_hat) throw DomainError("fit_rate: every sample needs t <= T_hat");
  }
  const auto window = select_window(history, T_hat, options);
  const auto fit = solve_fit(window, T_hat);

  RateFit out;
  out.alpha_hat = fit.coef(0);
  out.beta_hat = fit.coef(1);
  out.log_kappa_hat = fit.coef(2);
  out.residual = fit.rms;
  out.samples = window.size();
  out.s_lo = -std::log(T_hat - window.front().t);
  out.s_hi = -std::log(T_hat - window.back().t);
  out.alpha_lo = out.alpha_hi = out.alpha_hat;
  out.beta_lo = out.beta_hi = out.beta_hat;
  if (options.T_perturbation > 0.0) {
    for (double sign : {-1.0, 1.0}) {
      const double T_shift = T_hat + sign * options.T_perturbation;
      std::vector<SupSample> shifted;
      for (const auto& sample : window) {
        if (sample.t < T_shift) shifted.push_back(sample);
      }
      if (shifted.size() < 3) continue;
      const auto alt = solve_fit(shifted, T_shift);
      out.alpha_lo = std::min(out.alpha_lo, alt.coef(0));
      out.alpha_hi = std::max(out.alpha_hi, alt.coef(0));
      out.beta_lo = std::min(out.beta_lo, alt.coef(1));
      out.beta_hi = std::max(out.beta_hi, alt.coef(1));
    }
  }
  return out;
}

double blowup_profile(double z, const Params& params) noexcept {
  const double p = params.p;
  return std::pow(1.0 + (p - 1.0) * z * z / (4.0 * p), -1.0 / (p - 1.0));
}

ProfileReport profile_error(const SimField& field, double z_max, double amplitude) {
  const double s = field.s;
  if (!(s >= 4.0)) throw DomainError("profile_error: requires s >= 4");
  const double root = std::sqrt(s);
  if (!(z_max > 0.0) || z_max > field.mesh.extent / root * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "profile_error: z_max = " << z_max << " outside (0, R/sqrt(s)] = (0, "
       << field.mesh.extent / root << "]";
    throw DomainError(os.str());
  }
  ProfileReport report;
  report.s = s;
  report.z_max = z_max;
  for (std::size_t i = 0; i < field.mesh.nodes; ++i) {
    const double z = field.mesh.coordinate(i) / root;
    if (std::abs(z) > z_max) continue;
    ++report.nodes;
    const double err = std::abs(field.values[i] / amplitude - blowup_profile(z, field.params));
    report.sup_error = std::max(report.sup_error, err);
  }
  if (report.nodes < 8) {
    std::ostringstream os;
    os << "profile_error: only " << report.nodes << " nodes resolve |z| <= " << z_max;
    throw ResolutionError(os.str());
  }
  return report;
}

LyapunovReport lyapunov_audit(const RunLedger& ledger, const LyapunovAuditOptions& options) {
  const auto& snaps = ledger.snapshots;
  if (snaps.size() != ledger.cumulative_dissipation.size() || snaps.size() < 2) {
    throw ContractError("lyapunov_audit: malformed ledger");
  }
  if (snaps.back().s - snaps.front().s < 3.0 - 1e-9) {
    throw ContractError("lyapunov_audit: ledger must span at least 3 units of s");
  }
  LyapunovReport report;
  const double eps = 1e-9;
  std::size_t j = 0;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const double target = snaps[i].s + options.unit;
    j = std::max(j, i);
    while (j < snaps.size() && snaps[j].s < target - eps) ++j;
    if (j >= snaps.size()) break;
    if (std::abs(snaps[j].s - target) > eps) continue;
    ++report.windows_checked;
    const double dissipation = ledger.cumulative_dissipation[j] - ledger.cumulative_dissipation[i];
    const double margin = snaps[j].L - snaps[i].L + 0.5 * dissipation;
    report.max_unit_margin = std::max(report.max_unit_margin, margin);
    const double tol = options.rel_tol * (1.0 + std::abs(snaps[i].L));
    if (margin > tol) report.violations.push_back({"unit", snaps[i].s, margin});
  }
  for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
    const double increase = snaps[i + 1].L - snaps[i].L;
    report.max_step_increase = std::max(report.max_step_increase, increase);
    if (increase > options.step_tol) report.violations.push_back({"step", snaps[i].s, increase});
  }
  report.passed = report.violations.empty();
  return report;
}

BoundednessReport boundedness_audit(const RunLedger& ledger, double burn_in) {
  const auto& snaps = ledger.snapshots;
  if (snaps.empty()) throw ContractError("boundedness_audit: empty ledger");
  BoundednessReport report;
  const double s0 = snaps.front().s;
  report.min_N = snaps.front().N;
  for (const auto& snap : snaps) {
    report.min_N = std::min(report.min_N, snap.N);
    report.max_abs_L = std::max(report.max_abs_L, std::abs(snap.L));
    if (report.L_reference == 0.0 && snap.s >= s0 + 1.0 - 1e-9) report.L_reference = std::abs(snap.L);
  }
  if (report.L_reference == 0.0) report.L_reference = std::abs(snaps.back().L);
  report.N_bounded = report.min_N >= -(1.0 + 1e-3);
  report.L_bounded = report.max_abs_L <= 10.0 * report.L_reference;

  std::vector<double> seen;
  report.max_mass_ratio = 0.0;
  for (const auto& snap : snaps) {
    seen.push_back(snap.mass);
    if (snap.s < s0 + burn_in - 1e-9) continue;
    const double med = median(seen);
    if (med > 0.0) report.max_mass_ratio = std::max(report.max_mass_ratio, snap.mass / med);
  }
  report.mass_bounded = report.max_mass_ratio <= 2.0;
  return report;
}

RunLedger record_run(const SimField& w0, double s_end, const FunctionalConfig& cfg,
                     const EvolveOptions& options, SimField* final_field) {
  const QuadratureRule rule = rule_for(w0.mesh);
  RunLedger ledger;
  ledger.snapshots.push_back(snapshot(w0, rule, cfg));
  ledger.cumulative_dissipation.push_back(0.0);
  EvolveOptions opts = options;
  opts.on_step = [&](const SimField& before, const SimField& after) {
    const double d = ds_dissipation(before, after, rule) * (after.s - before.s);
    ledger.cumulative_dissipation.push_back(ledger.cumulative_dissipation.back() + d);
    ledger.snapshots.push_back(snapshot(after, rule, cfg));
    if (options.on_step) options.on_step(before, after);
  };
  SimField end = evolve(w0, s_end, opts);
  if (final_field != nullptr) *final_field = std::move(end);
  return ledger;
}

}  // namespace blowup
