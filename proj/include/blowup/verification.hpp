#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "blowup/analysis.hpp"
#include "blowup/functionals.hpp"

namespace blowup {

enum class SuiteStatus { pass, warn, fail };

[[nodiscard]] std::string to_string(SuiteStatus status);

struct SuiteResult {
  int id = 0;
  std::string name;
  SuiteStatus status = SuiteStatus::fail;
  std::string message;
  nlohmann::json metrics = nlohmann::json::object();
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  FunctionalConfig functionals;
  /// Random smooth data per parameter pair in the Lyapunov corpus.
  int corpus_size = 5;
  /// Runs the corpus members concurrently.
  bool parallel = true;
};

/// One similarity run of the Lyapunov corpus.
struct CorpusRun {
  std::string label;
  Params params;
  double amplitude = 0.0;
  RunLedger ledger;
  LyapunovReport lyapunov;
  BoundednessReport bounds;
};

/// Smooth even datum Σ_k c_k (g(y - m_k) + g(y + m_k))/2 with Gaussian bumps g of width σ_k,
/// c ∈ [0.3, 1], m ∈ [0, 1], σ ∈ [1.5, 3] drawn from (seed, index), rescaled to peak κ.
[[nodiscard]] SimField random_smooth_datum(const Mesh& mesh, double s0, const Params& params,
                                           std::uint64_t seed, int index);

/// κ · profile(y / √s0) with κ the limiting ODE amplitude.
[[nodiscard]] SimField near_profile_datum(const Mesh& mesh, double s0, const Params& params);

/// Tunes each datum onto the blow-up threshold and records it over [s0, s0 + 6]
/// for (p, a) = (3, 1) and (3, -1).
[[nodiscard]] std::vector<CorpusRun> lyapunov_corpus(const VerifyOptions& options);

[[nodiscard]] SuiteResult suite_ode_amplitude();
[[nodiscard]] SuiteResult suite_primitive_estimates();
[[nodiscard]] SuiteResult suite_quadrature();
[[nodiscard]] SuiteResult suite_lyapunov(const std::vector<CorpusRun>& corpus, double corpus_seconds);
[[nodiscard]] SuiteResult suite_rate_recovery();
[[nodiscard]] SuiteResult suite_boundedness(const std::vector<CorpusRun>& corpus);
[[nodiscard]] SuiteResult suite_profile(const VerifyOptions& options);
[[nodiscard]] SuiteResult suite_frame_equivalence(const VerifyOptions& options);

/// Every suite in order 1..8.
[[nodiscard]] std::vector<SuiteResult> run_all_suites(const VerifyOptions& options = {});

[[nodiscard]] nlohmann::json to_json(const SuiteResult& result);

}  // namespace blowup
