#include "blowup/ode_blowup.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr double kTimeToBlowupRelTol = 1e-13;

// d(log v)/ds = e^{-s} |v|^{p-1} log^a(2 + v^2), with v = e^y.
double log_v_rate(double s, double y, const Params& params) {
  return std::exp(-s + (params.p - 1.0) * y) *
         log_power(log_two_plus_exp(2.0 * y), params.a);
}

// Dormand-Prince 5(4) coefficients.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0}};
constexpr std::array<double, 7> kB = {35.0 / 384.0,     0.0,           500.0 / 1113.0, 125.0 / 192.0,
                                      -2187.0 / 6784.0, 11.0 / 84.0,  0.0};
constexpr std::array<double, 7> kBhat = {5179.0 / 57600.0,    0.0,           7571.0 / 16695.0,
                                         393.0 / 640.0,       -92097.0 / 339200.0,
                                         187.0 / 2100.0,      1.0 / 40.0};

struct StepResult {
  double y;
  double error;
};

StepResult dopri_step(double s, double y, double h, const Params& params) {
  std::array<double, 7> k{};
  for (std::size_t i = 0; i < 7; ++i) {
    double yi = y;
    for (std::size_t j = 0; j < i; ++j) yi += h * kA[i][j] * k[j];
    k[i] = log_v_rate(s + kC[i] * h, yi, params);
  }
  double y5 = y;
  double y4 = y;
  for (std::size_t i = 0; i < 7; ++i) {
    y5 += h * kB[i] * k[i];
    y4 += h * kBhat[i] * k[i];
  }
  return {y5, y5 - y4};
}

// PI controller on the scaled error (Hairer-Wanner constants for order 5).
class PiController {
 public:
  double next(double h, double err) {
    constexpr double kAlpha = 0.7 / 5.0;
    constexpr double kBeta = 0.4 / 5.0;
    double fac;
    if (err == 0.0) {
      fac = 5.0;
    } else {
      fac = 0.9 * std::pow(err, -kAlpha) * std::pow(previous_err_, kBeta);
    }
    fac = std::clamp(fac, 0.2, 5.0);
    if (err <= 1.0) previous_err_ = std::max(err, 1e-4);
    return h * fac;
  }

 private:
  double previous_err_ = 1e-4;
};

}  // namespace

double time_to_blowup_log(double log_M, const Params& params) {
  const double p = params.p;
  const double a = params.a;
  auto integrand = [&](double y) {
    const double l = log_M + y;
    return std::exp((1.0 - p) * l) / log_power(log_two_plus_exp(2.0 * l), a);
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 25, kTimeToBlowupRelTol, &error);
  // p > 1 makes the integral converge; anything else is a programming error upstream.
  if (!(value > 0.0) || !std::isfinite(value) || error > 1e-9 * value) {
    std::ostringstream os;
    os << "time_to_blowup: quadrature failed (log M = " << log_M << ", value " << value
       << ", error " << error << ")";
    throw NumericError(os.str());
  }
  return value;
}

double time_to_blowup(double M, const Params& params) {
  if (!(M >= 1.0) || !std::isfinite(M)) {
    std::ostringstream os;
    os << "time_to_blowup: requires finite M >= 1 (got " << M << ")";
    throw DomainError(os.str());
  }
  return time_to_blowup_log(std::log(M), params);
}

OdeTrajectory integrate_vT(const Params& params, double T, double s_max, const OdeOptions& options) {
  validate(params);
  std::ostringstream err;
  if (!(T > 0.0 && T <= 1.0)) err << "integrate_vT: T must lie in (0, 1] (got " << T << ")";
  else if (!(s_max >= 10.0)) err << "integrate_vT: s_max must be >= 10 (got " << s_max << ")";
  else if (!(options.rel_tol <= 1e-8 && options.rel_tol > 0.0))
    err << "integrate_vT: rel_tol must lie in (0, 1e-8] (got " << options.rel_tol << ")";
  else if (!(options.sample_ds > 0.0)) err << "integrate_vT: sample_ds must be positive";
  if (!err.str().empty()) throw ConfigError(err.str());

  // Anchor far enough beyond s_max that the first sample is reached by integrating backward.
  double log_anchor = std::log(std::max(options.anchor, 1.0));
  double s_anchor = -std::log(time_to_blowup_log(log_anchor, params));
  while (s_anchor < s_max + 1.0) {
    log_anchor += std::log(1e6);
    if (log_anchor > 700.0) throw NumericError("integrate_vT: anchor cannot reach s_max");
    s_anchor = -std::log(time_to_blowup_log(log_anchor, params));
  }

  const double s_min = std::max(1.0, -std::log(T));
  std::vector<double> targets;
  const auto count = static_cast<long>(std::floor((s_max - 1.0) / options.sample_ds + 1e-9));
  for (long k = count; k >= 0; --k) {
    const double s = 1.0 + options.sample_ds * static_cast<double>(k);
    if (s >= s_min) targets.push_back(s);
  }

  std::vector<OdeSample> reversed;
  double s = s_anchor;
  double y = log_anchor;
  double h = -0.1;
  PiController controller;
  const double abs_floor = 1e-12;
  for (double target : targets) {
    while (s > target) {
      const bool last = s + h <= target;
      const double step = last ? target - s : h;
      if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(s))) {
        std::ostringstream os;
        os << "integrate_vT: step size underflow at s = " << s;
        throw NumericError(os.str());
      }
      const auto [y_new, e] = dopri_step(s, y, step, params);
      const double scale = options.rel_tol * std::max(std::abs(y), std::abs(y_new)) + abs_floor;
      const double scaled = std::abs(e) / scale;
      if (!std::isfinite(y_new)) {
        h *= 0.2;
        continue;
      }
      if (scaled <= 1.0) {
        s = last ? target : s + step;
        y = y_new;
        if (!last) h = controller.next(step, scaled);
      } else {
        h = controller.next(step, scaled);
      }
    }
    const double tau = std::exp(-target);
    reversed.push_back({target, tau, T - tau, std::exp(y)});
  }

  OdeTrajectory trajectory;
  trajectory.T = T;
  trajectory.samples.assign(reversed.rbegin(), reversed.rend());
  return trajectory;
}

std::vector<RatioSample> asymptotic_ratio(const OdeTrajectory& trajectory, const Params& params) {
  std::vector<RatioSample> out;
  out.reserve(trajectory.samples.size());
  for (const auto& sample : trajectory.samples) {
    out.push_back({sample.s, sample.v / psi_of_tau(sample.tau, params)});
  }
  return out;
}

double ode_ratio_at(double s, const Params& params) {
  OdeOptions options;
  options.sample_ds = s - 1.0;
  const auto trajectory = integrate_vT(params, 1.0, std::max(s, 10.0), options);
  for (const auto& sample : trajectory.samples) {
    if (std::abs(sample.s - s) < 1e-9) return sample.v / psi_of_tau(sample.tau, params);
  }
  throw NumericError("ode_ratio_at: sample not produced");
}

}  // namespace blowup
