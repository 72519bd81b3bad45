#include <doctest.h>

#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/ode_blowup.hpp"
#include "blowup/physical_solver.hpp"
#include "oracles.hpp"

using namespace blowup;

namespace {

double sup(const GridField& u) {
  double m = 0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

GridField evolve_fixed(GridField u, const Params& P, double t_end, int steps) {
  const double dt = t_end / steps;
  for (int k = 0; k < steps; ++k) u = step(u, P, dt);
  return u;
}

}  // namespace

TEST_CASE("zero is a fixed point") {
  const Mesh mesh = make_mesh(Geometry::line, 1, 5.0, 65);
  GridField u = sample_field(mesh, [](double) { return 0.0; });
  u = evolve_fixed(u, make_params(3, 1, 1), 0.1, 10);
  for (double v : u.values) CHECK(v == 0.0);
}

TEST_CASE("constant data follows the ODE with second-order error") {
  const Params P = make_params(3, 0, 1);
  const double c = 1.0, t_end = 0.3;
  const double exact = 1.0 / std::sqrt(1.0 / (c * c) - 2 * t_end);
  double err[3];
  for (Geometry g : {Geometry::line, Geometry::radial}) {
    const Mesh mesh = make_mesh(g, g == Geometry::line ? 1 : 3, 4.0, 65);
    const Params Q = make_params(3, 0, mesh.dimension);
    for (int k = 0; k < 3; ++k) {
      const GridField u = evolve_fixed(sample_field(mesh, [&](double) { return c; }), Q, t_end, 50 << k);
      for (double v : u.values) CHECK(v == doctest::Approx(u.values[0]).epsilon(1e-12));
      err[k] = std::abs(u.values[0] - exact);
    }
    CHECK(std::log2(err[0] / err[1]) > 1.8);
    CHECK(std::log2(err[1] / err[2]) > 1.8);
  }
  (void)P;
}

TEST_CASE("small data decays monotonically") {
  const Params P = make_params(3, 0, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 10.0, 201);
  GridField u = sample_field(mesh, [](double x) { return 0.01 * std::exp(-x * x); });
  double prev = sup(u);
  for (int k = 0; k < 100; ++k) {
    u = step(u, P, 0.01);
    CHECK(sup(u) < prev);
    prev = sup(u);
  }
}

TEST_CASE("even data stays even") {
  const Params P = make_params(3, 1, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 6.0, 121);
  GridField u = sample_field(mesh, [](double x) { return 1.5 * std::exp(-x * x) + 0.2 * std::cos(x); });
  u = evolve_fixed(u, P, 0.05, 20);
  for (std::size_t i = 0; i < mesh.nodes; ++i) {
    CHECK(std::abs(u.values[i] - u.values[mesh.nodes - 1 - i]) <= 1e-13 * sup(u));
  }
}

TEST_CASE("refinement convergence") {
  const Params P = make_params(3, 1, 1);
  double value[3];
  for (int k = 0; k < 3; ++k) {
    const Mesh mesh = make_mesh(Geometry::line, 1, 4.0, (64 << k) + 1);
    const GridField u0 = sample_field(mesh, [](double x) { return 1.0 + 0.5 * std::exp(-2 * x * x); });
    const GridField u = evolve_fixed(u0, P, 0.1, 20 << k);
    value[k] = u.values[mesh.nodes / 2];
  }
  const double order = std::log2(std::abs(value[0] - value[1]) / std::abs(value[1] - value[2]));
  CHECK(order >= 1.5);
}

TEST_CASE("constant data: blow-up time matches the ODE") {
  for (double a : {0.0, 1.0, -1.0}) {
    const Params P = make_params(3, a, 1);
    const Mesh mesh = make_mesh(Geometry::line, 1, 2.0, 65);
    const double c = 1.2;
    const PhysicalRunResult r = run_to_blowup(sample_field(mesh, [&](double) { return c; }), P);
    REQUIRE(r.status == RunStatus::blowup);
    CHECK(oracle::rel(r.T_hat, time_to_blowup(c, P)) < 0.02);
    // The remaining time ~ 1/(2 M^2) is below the resolution of t, so T_hat may round onto t.
    CHECK(r.T_hat >= r.sup_history.back().t);
    CHECK(time_to_blowup(r.sup_history.back().sup, P) > 0.0);
    CHECK(r.sup_history.back().sup >= 1e8);
  }
}

TEST_CASE("large gaussian blows up at its centre") {
  const Params P = make_params(3, 1, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 8.0, 321);
  const double shift = 0.7;
  const PhysicalRunResult r =
      run_to_blowup(sample_field(mesh, [&](double x) { return 4.0 * std::exp(-(x - shift) * (x - shift)); }), P);
  REQUIRE(r.status == RunStatus::blowup);
  CHECK(std::abs(r.x0_hat - shift) < 0.1);
  // Eventually monotone: the last half of the history never decreases.
  const auto& h = r.sup_history;
  for (std::size_t i = h.size() / 2 + 1; i < h.size(); ++i) CHECK(h[i].sup >= h[i - 1].sup);
}

TEST_CASE("small data reports no blow-up") {
  const Params P = make_params(3, 1, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 10.0, 101);
  PhysicalRunOptions opts;
  opts.t_max = 2.0;
  opts.dt_max = 1e-2;
  const PhysicalRunResult r = run_to_blowup(sample_field(mesh, [](double x) { return 0.05 * std::exp(-x * x); }), P, opts);
  CHECK(r.status == RunStatus::no_blowup);
  CHECK(to_string(r.status) == "no blow-up detected");
}

TEST_CASE("advance_to stops exactly at t_end") {
  const Params P = make_params(3, 0, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 3.0, 65);
  const GridField u = advance_to(sample_field(mesh, [](double) { return 1.0; }), P, 0.25, 1e-3);
  CHECK(u.time == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(u.values[10] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("argument checks") {
  const Params P = make_params(3, 0, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 3.0, 65);
  const GridField u = sample_field(mesh, [](double) { return 1.0; });
  CHECK_THROWS_AS(step(u, P, 0.0), ContractError);
  CHECK_THROWS_AS(step(u, P, -1e-3), ContractError);
  PhysicalRunOptions opts;
  opts.M_stop = 1e4;
  CHECK_THROWS_AS(run_to_blowup(u, P, opts), ConfigError);
  CHECK_THROWS_AS(make_mesh(Geometry::line, 1, 3.0, 32), ConfigError);
}
