#pragma once

#include <filesystem>

#include <json.hpp>

#include "blowup/config.hpp"
#include "blowup/physical_solver.hpp"
#include "blowup/similarity_solver.hpp"

namespace blowup {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kProgramVersion = "0.1.0";

/// u0 on the configured grid. The profile datum is the similarity profile mapped to t = 0
/// with blow-up time solver.T, which must then satisfy T <= 1/e.
[[nodiscard]] GridField physical_initial(const RunConfig& config);

/// w0 on the configured grid at s0 = max(-log T, 2). The profile datum is
/// amplitude · κ · profile(y/√s0) with κ the limiting ODE amplitude.
[[nodiscard]] SimField similarity_initial(const RunConfig& config);

struct RunOutcome {
  /// 0 on success, 1 when a verification suite failed, 2 on an error.
  int exit_code = 0;
  std::filesystem::path directory;
  nlohmann::json report;
};

/// Executes the configured scenario and writes its CSV ledgers and report.json into the
/// run directory. Errors are caught, recorded in the report and turned into exit code 2;
/// ledgers gathered before the error are still written.
[[nodiscard]] RunOutcome run(const RunConfig& config);

}  // namespace blowup
