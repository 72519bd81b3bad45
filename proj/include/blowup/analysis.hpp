#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "blowup/errors.hpp"
#include "blowup/functionals.hpp"
#include "blowup/physical_solver.hpp"
#include "blowup/similarity_solver.hpp"

namespace blowup {

/// Least-squares design was rank deficient or had too few samples.
class FitError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Mesh too coarse for the requested evaluation window.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Fit of log M = α s - β log s + log κ with s = -log(T̂ - t), i.e. of
/// M ≈ κ (T̂-t)^{-α} (-log(T̂-t))^{-β}.
struct RateFit {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double log_kappa_hat = 0.0;
  /// Root-mean-square residual in log M.
  double residual = 0.0;
  /// Window in s = -log(T̂ - t).
  double s_lo = 0.0;
  double s_hi = 0.0;
  std::size_t samples = 0;
  /// Spread of the exponents when T̂ is moved by ± the perturbation.
  double alpha_lo = 0.0, alpha_hi = 0.0;
  double beta_lo = 0.0, beta_hi = 0.0;
};

struct RateFitOptions {
  double window_fraction = 0.6;
  double tau_min = 1e-7;
  double tau_max = 1e-2;
  std::size_t min_samples = 50;
  /// T̂ shift for the uncertainty band; 0 disables the extra fits.
  double T_perturbation = 0.0;
};

/// Throws FitError when fewer than min_samples lie in the window or the design is collinear,
/// DomainError when a sample has t > T̂.
[[nodiscard]] RateFit fit_rate(std::span<const SupSample> history, double T_hat,
                               const RateFitOptions& options = {});

struct ProfileReport {
  double s = 0.0;
  double sup_error = 0.0;
  double z_max = 0.0;
  std::size_t nodes = 0;
};

/// (1 + (p-1) z² / (4p))^{-1/(p-1)}.
[[nodiscard]] double blowup_profile(double z, const Params& params) noexcept;

/// sup over nodes with |y| <= z_max √s of |w(y)/amplitude - profile(y/√s)|.
/// Throws DomainError for s < 4 or z_max > R/√s, ResolutionError with fewer than 8 nodes.
[[nodiscard]] ProfileReport profile_error(const SimField& field, double z_max, double amplitude);

/// Functional snapshots of one similarity run plus the running dissipation
/// ∫_{s0}^{s} ∫ (∂_s w)² ρ dy dτ at every snapshot.
struct RunLedger {
  std::vector<FunctionalSnapshot> snapshots;
  std::vector<double> cumulative_dissipation;
};

struct Violation {
  std::string kind;  ///< "unit" (integrated inequality) or "step" (per-step increase)
  double s = 0.0;
  double magnitude = 0.0;
};

struct LyapunovAuditOptions {
  double unit = 1.0;
  /// Allowed excess in L(s+1) - L(s) + ½∫∫: rel_tol (1 + |L(s)|).
  double rel_tol = 1e-3;
  /// Allowed per-step increase of L.
  double step_tol = 1e-6;
};

struct LyapunovReport {
  bool passed = true;
  std::vector<Violation> violations;
  std::size_t windows_checked = 0;
  /// Largest L(s+1) - L(s) + ½∫∫ over all windows (negative is good).
  double max_unit_margin = -std::numeric_limits<double>::infinity();
  double max_step_increase = -std::numeric_limits<double>::infinity();
};

/// Checks L(s+1) - L(s) <= -½ ∫_s^{s+1}∫(∂_s w)²ρ + tol for every snapshot s with a
/// snapshot at s+1, and L non-increasing per step. Throws ContractError when the
/// ledger spans less than 3 units of s or is malformed.
[[nodiscard]] LyapunovReport lyapunov_audit(const RunLedger& ledger,
                                            const LyapunovAuditOptions& options = {});

struct BoundednessReport {
  double min_N = 0.0;
  double max_abs_L = 0.0;
  double L_reference = 0.0;  ///< |L(s0 + 1)|
  double max_mass_ratio = 0.0;  ///< max of mass / running median after burn-in
  bool N_bounded = false;
  bool L_bounded = false;
  bool mass_bounded = false;
  [[nodiscard]] bool passed() const noexcept { return N_bounded && L_bounded && mass_bounded; }
};

/// N >= -(1 + 1e-3), |L| <= 10 |L(s0+1)|, and ∫w²ρ <= 2 × running median once s >= s0 + burn_in.
[[nodiscard]] BoundednessReport boundedness_audit(const RunLedger& ledger, double burn_in = 5.0);

/// Runs evolve() while recording snapshots and dissipation at every macro step.
[[nodiscard]] RunLedger record_run(const SimField& w0, double s_end, const FunctionalConfig& cfg,
                                   const EvolveOptions& options = {}, SimField* final_field = nullptr);

}  // namespace blowup
