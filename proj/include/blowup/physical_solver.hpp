#pragma once

#include <functional>
#include <string>
#include <vector>

#include "blowup/core_math.hpp"
#include "blowup/errors.hpp"
#include "blowup/mesh.hpp"

namespace blowup {

/// Discrete u(·, t) on a uniform line or radial mesh.
struct GridField {
  Mesh mesh;
  std::vector<double> values;
  double time = 0.0;
};

/// Samples x -> u0(x) on the mesh at t = 0.
template <class Fn>
[[nodiscard]] GridField sample_field(const Mesh& mesh, Fn&& u0, double time = 0.0) {
  GridField field{mesh, std::vector<double>(mesh.nodes), time};
  for (std::size_t i = 0; i < mesh.nodes; ++i) field.values[i] = u0(mesh.coordinate(i));
  return field;
}

/// Signals that a step produced non-finite values; the run overshot the singularity.
class BlowupOvershoot : public NumericError {
 public:
  using NumericError::NumericError;
};

/// One IMEX step of ∂_t u = Δu + f(u): the ARS(2,2,2) scheme, L-stable implicit
/// diffusion with the explicit reaction, second order in dt. Throws ContractError for
/// dt <= 0, NumericError when the linear solve fails and BlowupOvershoot on non-finite output.
[[nodiscard]] GridField step(const GridField& field, const Params& params, double dt);

struct SupSample {
  double t;
  double sup;
};

enum class RunStatus { blowup, no_blowup };

[[nodiscard]] std::string to_string(RunStatus status);

struct PhysicalRunOptions {
  double M_stop = 1e8;
  /// dt = safety * min(dt_max, M / f(M)).
  double dt_safety = 0.2;
  /// Accuracy cap on dt; diffusion is implicit so no h^2 restriction applies.
  double dt_max = 1e-3;
  /// Time budget; reaching it without hitting M_stop means no blow-up was detected.
  double t_max = 10.0;
  /// Stop early once sup|u| falls below this value (decaying data).
  double decay_floor = 1e-8;
  /// Optional hook called after every accepted step.
  std::function<void(const GridField&)> observer;
};

struct PhysicalRunResult {
  RunStatus status = RunStatus::no_blowup;
  GridField final_field;
  std::vector<SupSample> sup_history;
  double T_hat = 0.0;
  double x0_hat = 0.0;
  double last_dt = 0.0;
};

/// Advances until sup|u| >= M_stop and extrapolates T_hat = t + time_to_blowup(sup|u|).
/// x0_hat is the argmax refined by a parabola through its neighbours.
[[nodiscard]] PhysicalRunResult run_to_blowup(const GridField& u0, const Params& params,
                                              const PhysicalRunOptions& options = {});

/// Advances with the same step control up to exactly t_end (no blow-up test).
[[nodiscard]] GridField advance_to(const GridField& u0, const Params& params, double t_end,
                                   double dt_max, double dt_safety = 0.2);

}  // namespace blowup
