#pragma once

#include <functional>

#include "blowup/quadrature.hpp"
#include "blowup/similarity_solver.hpp"

namespace blowup {

/// Constants of the weighted functionals. None of them is fixed constructively by the
/// theory; the defaults are the values every report echoes.
struct FunctionalConfig {
  double m0 = 10.0;
  double theta = 10.0;
  double A = 1.0;
  /// Cutoff radius R: ψ = 1 on B_R, 0 outside B_{2R}.
  double R = 5.0;

  /// b = m0 (p+3)/2.
  [[nodiscard]] double b(const Params& params) const noexcept { return m0 * (params.p + 3.0) / 2.0; }
};

void validate(const FunctionalConfig& cfg);

/// All functionals at one s. mass = ∫ w² ρ dy is stored so that L0, L and H can be
/// reconstructed from their parts.
struct FunctionalSnapshot {
  double s = 0.0;
  double mass = 0.0;
  double E = 0.0;
  double J = 0.0;
  double H = 0.0;
  double N = 0.0;
  double I = 0.0;
  double L0 = 0.0;
  double L = 0.0;
  double E_psi = 0.0;
  double I_psi = 0.0;
};

/// ∫ (½|∇w|² + w²/(2(p-1)) - e^{-(p+1)s/(p-1)} s^{2a/(p-1)} F(φw)) ρ dy.
/// The F term goes through weighted_F, which never forms φ(s).
[[nodiscard]] double eval_E(const SimField& field, const QuadratureRule& rule);
/// -(1/(2s)) ∫ w² ρ.
[[nodiscard]] double eval_J(const SimField& field, const QuadratureRule& rule);
/// E + m0 J.
[[nodiscard]] double eval_H(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg);
/// s^{-b} H + A e^{-s}.
[[nodiscard]] double eval_N(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg);
/// s^{-b} ∫ w² ρ.
[[nodiscard]] double eval_I(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg);
/// E - s^{-3/2} ∫ w² ρ.
[[nodiscard]] double eval_L0(const SimField& field, const QuadratureRule& rule);
/// exp((p+3)/√s) L0 + θ s^{-3/4}.
[[nodiscard]] double eval_L(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg);

/// ψ(y) = 1 for |y| <= R, 0 for |y| >= 2R, quintic smoothstep in between.
/// Throws ConfigError for R < 1.
[[nodiscard]] std::function<double(double)> cutoff_psi(double R);

/// E with ρ replaced by ψ² ρ. Throws ConfigError when 2R exceeds the rule's R_max.
[[nodiscard]] double eval_E_psi(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg);
/// s^{-(b+1)} ∫ w² ψ² ρ.
[[nodiscard]] double eval_I_psi(const SimField& field, const QuadratureRule& rule, const FunctionalConfig& cfg);

/// Every functional at field.s, sharing the quadrature passes.
[[nodiscard]] FunctionalSnapshot snapshot(const SimField& field, const QuadratureRule& rule,
                                          const FunctionalConfig& cfg);

}  // namespace blowup
