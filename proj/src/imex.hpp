#pragma once

// Shared ARS(2,2,2) stepper: u' = L u + g(t, u) with L tridiagonal (implicit) and g explicit.

#include <cmath>
#include <span>
#include <vector>

#include "blowup/mesh.hpp"

namespace blowup::detail {

inline const double kArsGamma = 1.0 - 1.0 / std::sqrt(2.0);
inline const double kArsDelta = 1.0 - 1.0 / (2.0 * kArsGamma);

/// explicit_rhs(t, values, out) fills out with g(t, values).
template <class ExplicitRhs>
std::vector<double> ars222_step(const Tridiagonal& L, std::span<const double> u, double t, double dt,
                                ExplicitRhs&& explicit_rhs) {
  const std::size_t n = u.size();
  const double g = kArsGamma;
  const double d = kArsDelta;
  std::vector<double> g0(n), g1(n), rhs(n), u1(n), u2(n);

  explicit_rhs(t, u, g0);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = u[i] + g * dt * g0[i];
  solve_shifted(L, g * dt, rhs, u1);

  explicit_rhs(t + g * dt, std::span<const double>(u1), g1);
  for (std::size_t i = 0; i < n; ++i) {
    // L u1 recovered from the first stage: g dt L u1 = u1 - u - g dt g0.
    const double Lu1 = (u1[i] - u[i] - g * dt * g0[i]) / (g * dt);
    rhs[i] = u[i] + dt * (d * g0[i] + (1.0 - d) * g1[i]) + dt * (1.0 - g) * Lu1;
  }
  solve_shifted(L, g * dt, rhs, u2);
  return u2;
}

}  // namespace blowup::detail
