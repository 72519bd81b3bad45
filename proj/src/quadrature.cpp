#include "blowup/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr double kMassTolerance = 1e-10;

// Gregory coefficients G_2..G_8 of the expansion x / log(1+x).
constexpr std::array<double, 7> kGregory = {1.0 / 12.0,        1.0 / 24.0,     19.0 / 720.0,
                                            3.0 / 160.0,       863.0 / 60480.0, 275.0 / 24192.0,
                                            33953.0 / 3628800.0};

// Relative corrections to the unit trapezoid weights at nodes 0..7 of a left endpoint.
std::array<double, kGregory.size() + 1> gregory_left_corrections() {
  std::array<double, kGregory.size() + 1> d{};
  for (std::size_t j = 1; j <= kGregory.size(); ++j) {
    const double c = ((j + 1) % 2 == 0 ? 1.0 : -1.0) * kGregory[j - 1];
    double binom = 1.0;
    for (std::size_t i = 0; i <= j; ++i) {
      const double sign = ((j - i) % 2 == 0) ? 1.0 : -1.0;
      d[i] += c * sign * binom;
      binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
    }
  }
  d[0] -= 0.5;
  return d;
}

double unit_sphere_area(int N) {
  // |S^{N-1}| = 2 π^{N/2} / Γ(N/2); equals 2 for N = 1.
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

}  // namespace

double QuadratureRule::spacing() const noexcept {
  return nodes.size() > 1 ? nodes[1] - nodes[0] : 0.0;
}

double gaussian_mass(int N) noexcept { return std::pow(4.0 * std::numbers::pi, 0.5 * N); }

QuadratureRule build_rule(int N, QuadratureMode mode, int resolution, double R_max) {
  std::ostringstream err;
  if (N < 1) err << "quadrature: N must be >= 1 (got " << N << ")";
  else if (resolution < 16) err << "quadrature: resolution must be >= 16 (got " << resolution << ")";
  else if (!(R_max >= 10.0)) err << "quadrature: R_max must be >= 10 (got " << R_max << ")";
  else if (mode == QuadratureMode::line && N != 1) err << "quadrature: line mode requires N = 1";
  if (!err.str().empty()) throw ConfigError(err.str());

  QuadratureRule rule;
  rule.dimension = N;
  rule.mode = mode;
  rule.truncation_radius = R_max;
  const auto n = static_cast<std::size_t>(resolution);
  rule.nodes.resize(n);
  rule.weights.resize(n);

  if (mode == QuadratureMode::line) {
    const double h = 2.0 * R_max / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = (i + 1 == n) ? R_max : -R_max + h * static_cast<double>(i);
      rule.nodes[i] = y;
      const double end = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      rule.weights[i] = end * h * std::exp(-0.25 * y * y);
    }
  } else {
    const double h = R_max / static_cast<double>(n - 1);
    const double area = unit_sphere_area(N);
    std::vector<double> unit(n, 1.0);
    unit[n - 1] = 0.5;
    if (N % 2 == 0) {
      const auto d = gregory_left_corrections();
      for (std::size_t i = 0; i < d.size() && i < n; ++i) unit[i] += d[i];
    } else {
      unit[0] = 0.5;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (i + 1 == n) ? R_max : h * static_cast<double>(i);
      rule.nodes[i] = r;
      rule.weights[i] = unit[i] * h * area * std::pow(r, N - 1) * std::exp(-0.25 * r * r);
    }
  }

  double mass = 0.0;
  for (double w : rule.weights) mass += w;
  const double expected = gaussian_mass(N);
  if (!(std::abs(mass - expected) <= kMassTolerance * expected)) {
    std::ostringstream os;
    os.precision(17);
    os << "quadrature: rule mass " << mass << " differs from (4π)^{N/2} = " << expected
       << " by more than " << kMassTolerance << " relative (N = " << N
       << ", resolution = " << resolution << ", R_max = " << R_max << ")";
    throw ConfigError(os.str());
  }
  return rule;
}

double integrate(const QuadratureRule& rule, std::span<const double> samples) {
  if (samples.size() != rule.size()) {
    std::ostringstream os;
    os << "integrate: " << samples.size() << " samples for a rule with " << rule.size() << " nodes";
    throw ContractError(os.str());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      std::ostringstream os;
      os << "integrate: non-finite sample " << samples[i] << " at node " << i << " (y = "
         << rule.nodes[i] << ")";
      throw NumericError(os.str());
    }
    sum += rule.weights[i] * samples[i];
  }
  return sum;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& g) {
  std::vector<double> samples(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) samples[i] = g(rule.nodes[i]);
  return integrate(rule, samples);
}

}  // namespace blowup
