#pragma once

#include <functional>
#include <vector>

#include "blowup/core_math.hpp"
#include "blowup/mesh.hpp"
#include "blowup/physical_solver.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

/// w(·, s) on the y-mesh of the rescaled equation.
struct SimField {
  Mesh mesh;
  std::vector<double> values;
  double s = 2.0;
  Params params;
};

/// s0 = max(-log T, 2).
[[nodiscard]] double similarity_start(double T) noexcept;

/// w(y) = u(x0 + y sqrt(T-t)) / ψ_T(t), s = -log(T-t), by cubic interpolation onto target.
/// Radial fields require x0 = 0. Throws DomainError unless 0 < T - t < 1 and
/// TruncationError when an unscaled target node leaves the physical mesh.
[[nodiscard]] SimField to_similarity(const GridField& u, double x0, double T, const Params& params,
                                     const Mesh& target);

/// Inverse map: u(x) = ψ_T(t) w((x - x0)/sqrt(T-t)) at t = T - e^{-s}.
[[nodiscard]] GridField from_similarity(const SimField& w, double x0, double T, const Mesh& target);

/// Largest ds for which the explicit second-order upwind drift stays within the CFL limit.
[[nodiscard]] double drift_step_bound(const Mesh& mesh, double cfl = 0.4);

/// Right-hand side without the Laplacian: -(y/2)·∇w - (1-a/s) w/(p-1) + s^{-a}|w|^{p-1}w log^a(2+φ²w²).
void explicit_rhs(const SimField& field, double s, std::span<const double> w, std::span<double> out);

/// One ARS(2,2,2) step of ∂_s w = Δw - (y/2)·∇w - (1-a/s)w/(p-1) + rescaled source, with
/// implicit diffusion and the rest explicit. Throws ContractError when ds <= 0 or ds exceeds
/// the drift CFL bound, NumericError on non-finite output.
[[nodiscard]] SimField step_w(const SimField& field, double ds);

/// ∫((w_after - w_before)/Δs)² ρ dy.
[[nodiscard]] double ds_dissipation(const SimField& before, const SimField& after,
                                    const QuadratureRule& rule);

struct EvolveOptions {
  /// Macro step; each macro step is split into equal substeps obeying the drift bound.
  double ds = 0.01;
  double cfl = 0.4;
  /// Stop early once max|w| exceeds this bound.
  double escape_bound = 1e6;
  /// Stop early once max|w| falls below this bound.
  double decay_bound = 0.0;
  /// Called after every macro step with the fields before and after it.
  std::function<void(const SimField&, const SimField&)> on_step;
};

/// Evolves to s_end (or until the escape bound is hit; check the returned s).
[[nodiscard]] SimField evolve(const SimField& w0, double s_end, const EvolveOptions& options = {});

struct ThresholdResult {
  double amplitude;   ///< λ on the decaying side of the threshold
  double bracket;     ///< width of the final bisection bracket
  int iterations;
};

/// Finds λ such that λ·shape sits at the threshold between decay and escape up to s_end:
/// this is the datum whose blow-up time in the physical frame is exactly T. Runs are
/// classified by max|w(s_end)| against reference, with early exits above 4·reference and
/// below reference/4. Bisection stops at relative bracket width rel_width.
[[nodiscard]] ThresholdResult tune_threshold(const SimField& shape, double s_end, double reference,
                                             const EvolveOptions& options = {}, double rel_width = 1e-11);

/// Quadrature rule whose nodes coincide with the mesh (resolution = nodes, R_max = extent).
[[nodiscard]] QuadratureRule rule_for(const Mesh& mesh);

/// Throws ContractError unless the rule nodes coincide with the mesh nodes.
void require_matching(const Mesh& mesh, const QuadratureRule& rule);

}  // namespace blowup
