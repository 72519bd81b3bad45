#pragma once

// Nonlinearity f(u) = |u|^{p-1} u log^a(2 + u^2), its primitive, and the explicit
// scaling functions of the self-similar change of variables.

namespace blowup {

/// Exponent triple of the equation u_t = Δu + |u|^{p-1}u log^a(2+u^2) in R^N.
struct Params {
  double p = 3.0;
  double a = 0.0;
  int N = 1;
};

/// Sobolev exponent (N+2)/(N-2); +inf for N <= 2.
[[nodiscard]] double sobolev_exponent(int N) noexcept;

/// Throws ConfigError unless p > 1, p finite, a finite, N >= 1 and p < (N+2)/(N-2) when N >= 3.
void validate(const Params& params);

/// Validating constructor.
[[nodiscard]] Params make_params(double p, double a, int N);

struct ScalingConstants {
  /// Closed form (2^a / (p-1)^{1-a})^{1/(p-1)}.
  double kappa_a;
  /// Limit of v_T(t)/psi_T(t) as t -> T, ((p-1)^{a-1} / 2^a)^{1/(p-1)}.
  /// Differs from kappa_a by the factor 2^{2a/(p-1)}; equal when a = 0.
  double limit_amplitude;
};

[[nodiscard]] double kappa_a(const Params& params) noexcept;
[[nodiscard]] double limit_amplitude(const Params& params) noexcept;
[[nodiscard]] ScalingConstants scaling_constants(const Params& params) noexcept;

/// x^a for x > 0, evaluated as exp(a log x).
[[nodiscard]] double log_power(double log_value, double a) noexcept;

/// log(2 + e^{l}) without forming e^{l} when it is large.
[[nodiscard]] double log_two_plus_exp(double l) noexcept;

[[nodiscard]] double eval_f(double u, const Params& params);
[[nodiscard]] double eval_F(double u, const Params& params);
[[nodiscard]] double eval_F1(double x, const Params& params);
[[nodiscard]] double eval_F2(double x, const Params& params);

/// ∫_0^1 σ^p log^a(2 + X^2 σ^2) dσ for X = e^{log_x}, so that F(X) = X^{p+1} * primitive_kernel(log X).
[[nodiscard]] double primitive_kernel(double log_x, const Params& params);

/// log φ(s) = (s - a log s)/(p-1).
[[nodiscard]] double log_phi(double s, const Params& params);
[[nodiscard]] double phi(double s, const Params& params);
/// (T-t)^{-1/(p-1)} (-log(T-t))^{-a/(p-1)}, for 0 < T-t < 1.
[[nodiscard]] double psi_T(double t, double T, const Params& params);
/// Same as psi_T but taking tau = T - t directly, which keeps precision when t is close to T.
[[nodiscard]] double psi_of_tau(double tau, const Params& params);

/// log(2 + φ(s)^2 w^2), never materialising φ(s)^2.
[[nodiscard]] double log_term(double s, double w, const Params& params);

/// Source term of the rescaled equation: s^{-a} |w|^{p-1} w log^a(2 + φ^2 w^2).
[[nodiscard]] double rescaled_nonlinearity(double s, double w, const Params& params);

/// e^{-(p+1)s/(p-1)} s^{2a/(p-1)} F(φ(s) w), computed as s^{-a} |w|^{p+1} primitive_kernel(log φ + log|w|).
[[nodiscard]] double weighted_F(double s, double w, const Params& params);

}  // namespace blowup
