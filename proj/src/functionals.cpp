#include "blowup/functionals.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

void require_s(double s) {
  if (!(s >= 1.0)) {
    std::ostringstream os;
    os << "functionals: require s >= 1 (got " << s << ")";
    throw DomainError(os.str());
  }
}

std::vector<double> energy_density(const SimField& field) {
  const auto grad = gradient(field.mesh, field.values);
  const Params& params = field.params;
  std::vector<double> density(field.values.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double w = field.values[i];
    density[i] = 0.5 * grad[i] * grad[i] + w * w / (2.0 * (params.p - 1.0)) -
                 weighted_F(field.s, w, params);
  }
  return density;
}

std::vector<double> squares(const SimField& field) {
  std::vector<double> sq(field.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = field.values[i] * field.values[i];
  return sq;
}

std::vector<double> cutoff_squared(const QuadratureRule& rule, const FunctionalConfig& cfg) {
  if (2.0 * cfg.R > rule.truncation_radius * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "cutoff: 2R = " << 2.0 * cfg.R << " exceeds the rule radius " << rule.truncation_radius;
    throw ConfigError(os.str());
  }
  const auto psi = cutoff_psi(cfg.R);
  std::vector<double> out(rule.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = psi(rule.nodes[i]);
    out[i] = v * v;
  }
  return out;
}

double weighted_sum(const QuadratureRule& rule, const std::vector<double>& g,
                    const std::vector<double>& factor) {
  std::vector<double> prod(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) prod[i] = g[i] * factor[i];
  return integrate(rule, prod);
}

double L_prefactor(double s, const Params& params) { return std::exp((params.p + 3.0) / std::sqrt(s)); }

}  // namespace

void validate(const FunctionalConfig& cfg) {
  if (!(cfg.m0 > 0.0 && cfg.theta > 0.0 && cfg.A > 0.0 && cfg.R > 0.0)) {
    throw ConfigError("functional config: m0, theta, A and R must be positive");
  }
}

double eval_E(const SimField& field, const QuadratureRule& rule) {
  require_s(field.s);
  require_matching(field.mesh, rule);
  return integrate(rule, energy_density(field));
}

double eval_J(const SimField& field, const QuadratureRule& rule) {
  require_s(field.s);
  require_matching(field.mesh, rule);
  return -integrate(rule, squares(field)) / (2.0 * field.s);
}

double eval_H(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg) {
  return eval_E(field, rule) + cfg.m0 * eval_J(field, rule);
}

double eval_N(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg) {
  return std::pow(field.s, -cfg.b(field.params)) * eval_H(field, rule, cfg) + cfg.A * std::exp(-field.s);
}

double eval_I(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg) {
  require_s(field.s);
  require_matching(field.mesh, rule);
  return std::pow(field.s, -cfg.b(field.params)) * integrate(rule, squares(field));
}

double eval_L0(const SimField& field, const QuadratureRule& rule) {
  require_s(field.s);
  require_matching(field.mesh, rule);
  return eval_E(field, rule) - integrate(rule, squares(field)) / (field.s * std::sqrt(field.s));
}

double eval_L(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg) {
  return L_prefactor(field.s, field.params) * eval_L0(field, rule) +
         cfg.theta * std::pow(field.s, -0.75);
}

std::function<double(double)> cutoff_psi(double R) {
  if (!(R >= 1.0)) {
    std::ostringstream os;
    os << "cutoff: R must be >= 1 (got " << R << ")";
    throw ConfigError(os.str());
  }
  return [R](double y) {
    const double r = std::abs(y);
    if (r <= R) return 1.0;
    if (r >= 2.0 * R) return 0.0;
    const double t = (r - R) / R;
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
  };
}

double eval_E_psi(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg) {
  require_s(field.s);
  require_matching(field.mesh, rule);
  return weighted_sum(rule, energy_density(field), cutoff_squared(rule, cfg));
}

double eval_I_psi(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg) {
  require_s(field.s);
  require_matching(field.mesh, rule);
  return std::pow(field.s, -(cfg.b(field.params) + 1.0)) *
         weighted_sum(rule, squares(field), cutoff_squared(rule, cfg));
}

FunctionalSnapshot snapshot(const SimField& field, const QuadratureRule& rule,
                            const FunctionalConfig& cfg) {
  require_s(field.s);
  require_matching(field.mesh, rule);
  const double s = field.s;
  const double b = cfg.b(field.params);
  const auto density = energy_density(field);
  const auto sq = squares(field);
  const auto psi2 = cutoff_squared(rule, cfg);

  FunctionalSnapshot snap;
  snap.s = s;
  snap.mass = integrate(rule, sq);
  snap.E = integrate(rule, density);
  snap.J = -snap.mass / (2.0 * s);
  snap.H = snap.E + cfg.m0 * snap.J;
  snap.N = std::pow(s, -b) * snap.H + cfg.A * std::exp(-s);
  snap.I = std::pow(s, -b) * snap.mass;
  snap.L0 = snap.E - snap.mass / (s * std::sqrt(s));
  snap.L = L_prefactor(s, field.params) * snap.L0 + cfg.theta * std::pow(s, -0.75);
  snap.E_psi = weighted_sum(rule, density, psi2);
  snap.I_psi = std::pow(s, -(b + 1.0)) * weighted_sum(rule, sq, psi2);
  return snap;
}

}  // namespace blowup
