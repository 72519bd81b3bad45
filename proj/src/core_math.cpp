#include "blowup/core_math.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr double kPrimitiveRelTol = 1e-10;
// log(1e6): above this log(φ²w²) the expanded form of log(2 + φ²w²) is used.
const double kExpandedLogThreshold = std::log(1e6);

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    std::ostringstream os;
    os << what << ": non-finite argument " << x;
    throw DomainError(os.str());
  }
}

}  // namespace

double sobolev_exponent(int N) noexcept {
  if (N <= 2) return std::numeric_limits<double>::infinity();
  return static_cast<double>(N + 2) / static_cast<double>(N - 2);
}

void validate(const Params& params) {
  std::ostringstream os;
  if (!std::isfinite(params.p) || !(params.p > 1.0)) {
    os << "p must be finite and > 1 (got " << params.p << ")";
  } else if (!std::isfinite(params.a)) {
    os << "a must be finite (got " << params.a << ")";
  } else if (params.N < 1) {
    os << "N must be >= 1 (got " << params.N << ")";
  } else if (params.N >= 3 && !(params.p < sobolev_exponent(params.N))) {
    os << "p = " << params.p << " violates p < (N+2)/(N-2) = " << sobolev_exponent(params.N)
       << " for N = " << params.N;
  } else {
    return;
  }
  throw ConfigError(os.str());
}

Params make_params(double p, double a, int N) {
  Params params{p, a, N};
  validate(params);
  return params;
}

double kappa_a(const Params& params) noexcept {
  const double p = params.p;
  const double a = params.a;
  return std::pow(std::pow(2.0, a) / std::pow(p - 1.0, 1.0 - a), 1.0 / (p - 1.0));
}

double limit_amplitude(const Params& params) noexcept {
  const double p = params.p;
  const double a = params.a;
  return std::pow(std::pow(p - 1.0, a - 1.0) / std::pow(2.0, a), 1.0 / (p - 1.0));
}

ScalingConstants scaling_constants(const Params& params) noexcept {
  return {kappa_a(params), limit_amplitude(params)};
}

double log_power(double log_value, double a) noexcept {
  if (a == 0.0) return 1.0;
  return std::exp(a * std::log(log_value));
}

double log_two_plus_exp(double l) noexcept {
  if (l > kExpandedLogThreshold) return l + std::log1p(2.0 * std::exp(-l));
  return std::log(2.0 + std::exp(l));
}

double eval_f(double u, const Params& params) {
  require_finite(u, "eval_f");
  if (u == 0.0) return 0.0;
  const double au = std::abs(u);
  const double magnitude = std::pow(au, params.p) * log_power(std::log(2.0 + u * u), params.a);
  return u > 0.0 ? magnitude : -magnitude;
}

double primitive_kernel(double log_x, const Params& params) {
  const double p = params.p;
  const double a = params.a;
  if (a == 0.0) return 1.0 / (p + 1.0);
  auto integrand = [&](double sigma) {
    if (sigma <= 0.0) return 0.0;
    const double l = 2.0 * (log_x + std::log(sigma));
    return std::pow(sigma, p) * log_power(log_two_plus_exp(l), a);
  };
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 20,
                                                                    kPrimitiveRelTol, &error);
  if (!std::isfinite(value) || error > kPrimitiveRelTol * std::abs(value)) {
    std::ostringstream os;
    os << "primitive of f: quadrature did not reach relative tolerance " << kPrimitiveRelTol
       << " (log|x| = " << log_x << ", estimate " << value << ", error " << error << ")";
    throw NumericError(os.str());
  }
  return value;
}

double eval_F(double u, const Params& params) {
  require_finite(u, "eval_F");
  if (u == 0.0) return 0.0;
  const double au = std::abs(u);
  if (params.a == 0.0) return std::pow(au, params.p + 1.0) / (params.p + 1.0);
  return std::pow(au, params.p + 1.0) * primitive_kernel(std::log(au), params);
}

double eval_F1(double x, const Params& params) {
  require_finite(x, "eval_F1");
  if (params.a == 0.0 || x == 0.0) return 0.0;
  const double p = params.p;
  const double a = params.a;
  return -(2.0 * a / ((p + 1.0) * (p + 1.0))) * std::pow(std::abs(x), p + 1.0) *
         log_power(std::log(2.0 + x * x), a - 1.0);
}

double eval_F2(double x, const Params& params) {
  require_finite(x, "eval_F2");
  if (x == 0.0) return 0.0;
  return eval_F(x, params) - x * eval_f(x, params) / (params.p + 1.0) - eval_F1(x, params);
}

double log_phi(double s, const Params& params) {
  require_finite(s, "log_phi");
  if (!(s > 0.0)) throw DomainError("log_phi: s must be positive");
  return (s - params.a * std::log(s)) / (params.p - 1.0);
}

double phi(double s, const Params& params) {
  if (!(s >= 1.0)) throw DomainError("phi: requires s >= 1");
  return std::exp(log_phi(s, params));
}

double psi_of_tau(double tau, const Params& params) {
  require_finite(tau, "psi_T");
  if (!(tau > 0.0) || !(tau < 1.0)) {
    std::ostringstream os;
    os << "psi_T: requires 0 < T - t < 1 (got T - t = " << tau << ")";
    throw DomainError(os.str());
  }
  const double s = -std::log(tau);
  return std::exp((s - params.a * std::log(s)) / (params.p - 1.0));
}

double psi_T(double t, double T, const Params& params) {
  require_finite(t, "psi_T");
  require_finite(T, "psi_T");
  return psi_of_tau(T - t, params);
}

double log_term(double s, double w, const Params& params) {
  require_finite(w, "log_term");
  if (!(s >= 1.0)) throw DomainError("log_term: requires s >= 1");
  if (w == 0.0) return std::log(2.0);
  return log_two_plus_exp(2.0 * (log_phi(s, params) + std::log(std::abs(w))));
}

double rescaled_nonlinearity(double s, double w, const Params& params) {
  if (w == 0.0) {
    require_finite(s, "rescaled_nonlinearity");
    return 0.0;
  }
  const double a = params.a;
  const double magnitude = std::pow(std::abs(w), params.p) *
                           log_power(log_term(s, w, params), a) * std::exp(-a * std::log(s));
  return w > 0.0 ? magnitude : -magnitude;
}

double weighted_F(double s, double w, const Params& params) {
  require_finite(w, "weighted_F");
  if (!(s >= 1.0)) throw DomainError("weighted_F: requires s >= 1");
  if (w == 0.0) return 0.0;
  const double aw = std::abs(w);
  return std::exp(-params.a * std::log(s)) * std::pow(aw, params.p + 1.0) *
         primitive_kernel(log_phi(s, params) + std::log(aw), params);
}

}  // namespace blowup
