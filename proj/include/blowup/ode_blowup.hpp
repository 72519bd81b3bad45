#pragma once

#include <vector>

#include "blowup/core_math.hpp"

namespace blowup {

struct OdeSample {
  double s;    ///< -log(T - t)
  double tau;  ///< T - t, kept separately because t rounds to T for large s
  double t;
  double v;
};

/// Samples of the solution v_T of v' = f(v), v(T) = ∞, ordered by increasing t.
struct OdeTrajectory {
  std::vector<OdeSample> samples;
  double T = 1.0;
};

struct OdeOptions {
  double rel_tol = 1e-10;
  /// Spacing of the output samples in s.
  double sample_ds = 0.1;
  /// Value of v the backward integration starts from; raised when it does not reach s_max.
  double anchor = 1e12;
};

/// Backward shooting from the singularity. The separable ODE is integrated in the
/// variables (s, log v), where d log v / ds = e^{-s} f(v)/v, with an adaptive
/// Dormand-Prince 5(4) pair and PI step control, from the anchor v_a at
/// s_a = -log(time_to_blowup(v_a)) down to s = 1. Output samples lie on s = 1 + k*sample_ds.
/// Throws ConfigError on bad arguments and NumericError on step-size underflow.
[[nodiscard]] OdeTrajectory integrate_vT(const Params& params, double T, double s_max,
                                         const OdeOptions& options = {});

/// ∫_M^∞ dv / f(v), evaluated as ∫_0^∞ (M e^y) / f(M e^y) dy by adaptive Gauss-Kronrod.
[[nodiscard]] double time_to_blowup(double M, const Params& params);

/// Same integral written in log M, for anchors beyond the range of double.
[[nodiscard]] double time_to_blowup_log(double log_M, const Params& params);

struct RatioSample {
  double s;
  double ratio;
};

/// v(t(s)) / ψ_T(t(s)) for every sample.
[[nodiscard]] std::vector<RatioSample> asymptotic_ratio(const OdeTrajectory& trajectory,
                                                        const Params& params);

/// v_T/ψ_T at one value of s, from a fresh backward integration. Used to normalise
/// similarity fields against the exact ODE amplitude.
[[nodiscard]] double ode_ratio_at(double s, const Params& params);

}  // namespace blowup
