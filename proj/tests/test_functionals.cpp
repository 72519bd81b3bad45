#include <doctest.h>

#include <cmath>
#include <random>

#include "blowup/errors.hpp"
#include "blowup/functionals.hpp"
#include "oracles.hpp"

using namespace blowup;

namespace {

SimField field_from(const Mesh& mesh, double s, const Params& P, const std::function<double(double)>& g) {
  SimField w{mesh, std::vector<double>(mesh.nodes), s, P};
  for (std::size_t i = 0; i < mesh.nodes; ++i) w.values[i] = g(mesh.coordinate(i));
  return w;
}

// Compactly supported bump on |y| < 3.
double bump(double y) {
  const double q = 1 - y * y / 9;
  return std::abs(y) < 3 ? 0.8 * q * q * q * q : 0.0;
}

}  // namespace

TEST_CASE("constant field against closed forms") {
  const Params P = make_params(3, 1, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 401);
  const QuadratureRule rule = rule_for(mesh);
  const FunctionalConfig cfg;
  const double c = 0.6, s = 7.0, m = std::sqrt(4 * M_PI);
  const SimField w = field_from(mesh, s, P, [&](double) { return c; });
  const double E = m * (c * c / 4 - weighted_F(s, c, P));
  CHECK(oracle::rel(eval_E(w, rule), E) < 1e-10);
  CHECK(oracle::rel(eval_J(w, rule), -m * c * c / (2 * s)) < 1e-10);
  const double b = 10 * 6 / 2.0;
  CHECK(cfg.b(P) == b);
  CHECK(oracle::rel(eval_I(w, rule, cfg), std::pow(s, -b) * m * c * c) < 1e-10);
  CHECK(oracle::rel(eval_L0(w, rule), E - m * c * c * std::pow(s, -1.5)) < 1e-10);
}

TEST_CASE("energy of a gaussian against an extended precision oracle") {
  const Params P = make_params(3, 0, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 801);
  const QuadratureRule rule = rule_for(mesh);
  const double eps = 0.3, s = 3.0;
  const SimField w = field_from(mesh, s, P, [&](double y) { return eps * std::exp(-y * y / 4); });
  // At a = 0 the F term reduces to w^4/4 exactly.
  const long double ref = oracle::simpson(
      [&](long double y) {
        const long double g = eps * std::exp(-y * y / 4), dg = -y / 2 * g;
        return (dg * dg / 2 + g * g / 4 - g * g * g * g / 4) * std::exp(-y * y / 4);
      },
      -20.0L, 20.0L, 40000);
  // Centered differences carry an O(h²) error in the gradient term.
  CHECK(oracle::rel(eval_E(w, rule), static_cast<double>(ref)) < 1e-3);
}

TEST_CASE("snapshot reconstruction identities are exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 201);
  const QuadratureRule rule = rule_for(mesh);
  FunctionalConfig cfg;
  for (int trial = 0; trial < 5; ++trial) {
    const Params P = make_params(3, trial % 2 ? 1.0 : -1.0, 1);
    const double c1 = U(rng), c2 = U(rng);
    const double s = 10.0;
    const SimField w = field_from(mesh, s, P, [&](double y) { return c1 * std::exp(-y * y / 8) + c2 * std::cos(y) / (1 + y * y); });
    const FunctionalSnapshot q = snapshot(w, rule, cfg);
    CHECK(q.H - q.E - cfg.m0 * q.J == 0.0);
    CHECK(q.L - (std::exp((P.p + 3) / std::sqrt(s)) * q.L0 + cfg.theta * std::pow(s, -0.75)) == 0.0);
    CHECK(q.N == std::pow(s, -cfg.b(P)) * q.H + cfg.A * std::exp(-s));
    CHECK(q.E == eval_E(w, rule));
    CHECK(q.H == eval_H(w, rule, cfg));
    CHECK(q.N == eval_N(w, rule, cfg));
    CHECK(q.L == eval_L(w, rule, cfg));
    CHECK(q.E_psi == doctest::Approx(eval_E_psi(w, rule, cfg)).epsilon(1e-14));
    CHECK(q.I_psi == doctest::Approx(eval_I_psi(w, rule, cfg)).epsilon(1e-14));
  }
}

TEST_CASE("cutoff") {
  const auto psi = cutoff_psi(5.0);
  CHECK(psi(0.0) == 1.0);
  CHECK(psi(5.0) == 1.0);
  CHECK(psi(10.0) == 0.0);
  CHECK(psi(-10.0) == 0.0);
  CHECK(psi(7.5) > 0.0);
  CHECK(psi(7.5) < 1.0);
  double prev = 1.0;
  for (double r = 5.0; r <= 10.0; r += 0.1) {
    CHECK(psi(r) <= prev);
    prev = psi(r);
  }
  CHECK_THROWS_AS(cutoff_psi(0.5), ConfigError);
}

TEST_CASE("zero field") {
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 201);
  const QuadratureRule rule = rule_for(mesh);
  const SimField w = field_from(mesh, 4.0, make_params(3, 1, 1), [](double) { return 0.0; });
  const FunctionalConfig cfg;
  CHECK(eval_E(w, rule) == 0.0);
  CHECK(eval_E_psi(w, rule, cfg) == 0.0);
  CHECK(eval_I_psi(w, rule, cfg) == 0.0);
}

TEST_CASE("localized energy equals the full energy on the support") {
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 401);
  const QuadratureRule rule = rule_for(mesh);
  const SimField w = field_from(mesh, 5.0, make_params(3, 1, 1), bump);
  FunctionalConfig cfg;
  cfg.R = 5.0;
  CHECK(oracle::rel(eval_E_psi(w, rule, cfg), eval_E(w, rule)) <= 1e-10);
  // Growing R moves E_ψ towards E.
  const double E = eval_E(w, rule);
  double prev = INFINITY;
  for (double R : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    cfg.R = R;
    const double gap = std::abs(eval_E_psi(w, rule, cfg) - E);
    CHECK(gap <= prev + 1e-15);
    prev = gap;
  }
}

TEST_CASE("radial functionals") {
  const Params P = make_params(3, 0, 3);
  const Mesh mesh = make_mesh(Geometry::radial, 3, 20.0, 401);
  const QuadratureRule rule = rule_for(mesh);
  const double c = 0.5;
  const SimField w = field_from(mesh, 3.0, P, [&](double) { return c; });
  const double m = std::pow(4 * M_PI, 1.5);
  CHECK(oracle::rel(eval_E(w, rule), m * (c * c / 4 - std::pow(c, 4) / 4)) < 1e-10);
}

TEST_CASE("configuration errors") {
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 201);
  const QuadratureRule rule = rule_for(mesh);
  const SimField w = field_from(mesh, 4.0, make_params(3, 1, 1), bump);
  FunctionalConfig cfg;
  cfg.R = 11.0;
  CHECK_THROWS_AS(eval_E_psi(w, rule, cfg), ConfigError);
  CHECK_THROWS_AS(eval_I_psi(w, rule, cfg), ConfigError);
  FunctionalConfig bad;
  bad.m0 = -1;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("stable far beyond the range of phi") {
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 201);
  const QuadratureRule rule = rule_for(mesh);
  const SimField w = field_from(mesh, 1400.0, make_params(2, 1, 1), [](double y) { return std::exp(-y * y / 8); });
  const FunctionalSnapshot q = snapshot(w, rule, FunctionalConfig{});
  CHECK(std::isfinite(q.E));
  CHECK(std::isfinite(q.L));
  CHECK(std::isfinite(q.E_psi));
}
