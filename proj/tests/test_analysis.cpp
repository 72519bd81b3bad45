#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "blowup/analysis.hpp"
#include "blowup/errors.hpp"

using namespace blowup;

namespace {

std::vector<SupSample> model_history(double T, double alpha, double beta, double log_kappa, int n = 400) {
  std::vector<SupSample> h;
  for (int k = 0; k <= n; ++k) {
    const double tau = std::pow(10.0, -1.0 - 7.5 * k / n);
    const double s = -std::log(tau);
    h.push_back({T - tau, std::exp(log_kappa + alpha * s - beta * std::log(s))});
  }
  return h;
}

SimField constant_field(const Mesh& mesh, double c, double s, const Params& P) {
  return SimField{mesh, std::vector<double>(mesh.nodes, c), s, P};
}

}  // namespace

TEST_CASE("exact model is recovered") {
  const auto h = model_history(1.0, 0.5, 0.5, 0.1);
  const RateFit fit = fit_rate(h, 1.0);
  CHECK(fit.residual <= 1e-10);
  CHECK(fit.alpha_hat == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(fit.beta_hat == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(fit.log_kappa_hat == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(fit.s_lo < fit.s_hi);
  CHECK(fit.s_hi <= -std::log(1e-7) + 1e-9);
  CHECK(fit.s_lo >= -std::log(1e-2) - 1e-9);
}

TEST_CASE("rescaling M shifts only the amplitude") {
  const auto h = model_history(1.0, 0.5, -0.5, 0.0);
  auto g = h;
  const double lambda = 37.0;
  for (auto& q : g) q.sup *= lambda;
  const RateFit a = fit_rate(h, 1.0), b = fit_rate(g, 1.0);
  CHECK(b.alpha_hat == doctest::Approx(a.alpha_hat).epsilon(1e-10));
  CHECK(b.beta_hat == doctest::Approx(a.beta_hat).epsilon(1e-9));
  CHECK(b.log_kappa_hat - a.log_kappa_hat == doctest::Approx(std::log(lambda)).epsilon(1e-9));
}

TEST_CASE("perturbation band brackets the estimate") {
  RateFitOptions fo;
  fo.T_perturbation = 1e-9;
  const RateFit fit = fit_rate(model_history(1.0, 0.5, 0.5, 0.0), 1.0, fo);
  CHECK(fit.alpha_lo <= fit.alpha_hat);
  CHECK(fit.alpha_hi >= fit.alpha_hat);
  CHECK(fit.alpha_hi - fit.alpha_lo > 0.0);
  CHECK(fit.beta_lo <= fit.beta_hat);
  CHECK(fit.beta_hi >= fit.beta_hat);
}

TEST_CASE("fit errors") {
  const auto h = model_history(1.0, 0.5, 0.5, 0.0, 40);
  CHECK_THROWS_AS(fit_rate(h, 1.0), FitError);
  auto late = model_history(1.0, 0.5, 0.5, 0.0);
  late.push_back({1.5, 1e9});
  CHECK_THROWS_AS(fit_rate(late, 1.0), DomainError);
}

TEST_CASE("profile error") {
  const Params P = make_params(3, 1, 1);
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 401);
  const double s = 9.0, amp = 0.74;
  SimField w{mesh, std::vector<double>(mesh.nodes), s, P};
  for (std::size_t i = 0; i < mesh.nodes; ++i) w.values[i] = amp * blowup_profile(mesh.coordinate(i) / 3.0, P);
  const ProfileReport r = profile_error(w, 1.0, amp);
  CHECK(r.sup_error < 1e-15);
  CHECK(r.nodes == 61);
  CHECK(blowup_profile(0.0, P) == 1.0);
  CHECK(blowup_profile(2.0, P) == doctest::Approx(std::pow(1 + 2 * 4.0 / 12, -0.5)));
  CHECK(profile_error(w, 1.0, amp * 1.1).sup_error == doctest::Approx(1 - 1 / 1.1).epsilon(1e-12));
  SimField early = w;
  early.s = 3.0;
  CHECK_THROWS_AS(profile_error(early, 1.0, amp), DomainError);
  CHECK_THROWS_AS(profile_error(w, 7.0, amp), DomainError);
  const Mesh coarse = make_mesh(Geometry::line, 1, 20.0, 64);
  SimField c{coarse, std::vector<double>(coarse.nodes, amp), s, P};
  CHECK_THROWS_AS(profile_error(c, 0.3, amp), ResolutionError);
}

TEST_CASE("profile error under grid refinement") {
  const Params P = make_params(3, 1, 1);
  const double s = 9.0;
  auto field = [&](std::size_t n) {
    const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, n);
    SimField w{mesh, std::vector<double>(n), s, P};
    for (std::size_t i = 0; i < n; ++i) {
      const double z = mesh.coordinate(i) / 3.0;
      w.values[i] = blowup_profile(z, P) + 0.05 * z * z * std::exp(-z * z);
    }
    return profile_error(w, 1.0, 1.0).sup_error;
  };
  const double e1 = field(401), e2 = field(801), e3 = field(1601);
  CHECK(std::abs(e2 - e1) < 1e-3);
  CHECK(std::abs(e3 - e2) <= std::abs(e2 - e1) + 1e-12);
}

TEST_CASE("ledger of the zero and stationary runs") {
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 201);
  const FunctionalConfig cfg;
  const RunLedger zero = record_run(constant_field(mesh, 0.0, 2.0, make_params(3, 1, 1)), 6.0, cfg);
  const LyapunovReport rz = lyapunov_audit(zero);
  CHECK(rz.passed);
  CHECK(rz.windows_checked > 0);
  CHECK(boundedness_audit(zero).passed());

  const RunLedger flat = record_run(constant_field(mesh, std::sqrt(0.5), 2.0, make_params(3, 0, 1)), 6.0, cfg);
  CHECK(flat.snapshots.size() == flat.cumulative_dissipation.size());
  CHECK(flat.snapshots.size() == 401);
  CHECK(flat.cumulative_dissipation.back() <= 1e-8 * 4);
  for (const auto& q : flat.snapshots) CHECK(q.mass == doctest::Approx(flat.snapshots.front().mass).epsilon(1e-12));
}

TEST_CASE("time-reversed ledger fails the audit") {
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 201);
  const RunLedger zero = record_run(constant_field(mesh, 0.0, 2.0, make_params(3, 1, 1)), 6.0, FunctionalConfig{});
  RunLedger reversed = zero;
  std::reverse(reversed.snapshots.begin(), reversed.snapshots.end());
  for (std::size_t i = 0; i < reversed.snapshots.size(); ++i) reversed.snapshots[i].s = zero.snapshots[i].s;
  const LyapunovReport r = lyapunov_audit(reversed);
  CHECK_FALSE(r.passed);
  CHECK(!r.violations.empty());
  CHECK(r.violations.front().magnitude > 0.0);
}

TEST_CASE("audit contract") {
  const Mesh mesh = make_mesh(Geometry::line, 1, 20.0, 201);
  const RunLedger shortrun = record_run(constant_field(mesh, 0.0, 2.0, make_params(3, 1, 1)), 4.0, FunctionalConfig{});
  CHECK_THROWS_AS(lyapunov_audit(shortrun), ContractError);
  RunLedger broken = shortrun;
  broken.cumulative_dissipation.pop_back();
  CHECK_THROWS_AS(lyapunov_audit(broken), ContractError);
}

TEST_CASE("boundedness detects mass growth") {
  RunLedger ledger;
  for (int k = 0; k <= 100; ++k) {
    FunctionalSnapshot q;
    q.s = 2.0 + 0.1 * k;
    q.mass = k < 90 ? 1.0 : 5.0;
    q.L = 1.0;
    q.N = 0.0;
    ledger.snapshots.push_back(q);
    ledger.cumulative_dissipation.push_back(0.0);
  }
  const BoundednessReport r = boundedness_audit(ledger);
  CHECK_FALSE(r.mass_bounded);
  CHECK(r.N_bounded);
  CHECK(r.L_bounded);
  CHECK_FALSE(r.passed());
}
