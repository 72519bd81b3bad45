#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "blowup/core_math.hpp"
#include "blowup/functionals.hpp"
#include "blowup/mesh.hpp"

namespace blowup {

enum class Scenario { ode, physical, similarity, verify };
enum class InitialKind { constant, gaussian, profile, file };

[[nodiscard]] std::string to_string(Scenario scenario);
[[nodiscard]] std::string to_string(InitialKind kind);

struct InitialSpec {
  InitialKind kind = InitialKind::gaussian;
  /// Value of the constant datum.
  double c = 1.0;
  /// Peak of the gaussian datum, or the multiple of κ for the profile datum.
  double amplitude = 2.0;
  double width = 1.0;
  /// Two-column CSV (coordinate, value) interpolated onto the grid.
  std::string path;
};

struct GridSpec {
  Geometry geometry = Geometry::line;
  double extent = 20.0;
  int resolution = 401;
};

struct SolverSpec {
  // ode
  double rel_tol = 1e-10;
  double s_max = 30.0;
  /// Blow-up time of the ODE solution and of the similarity frame.
  double T = 1.0;
  // similarity
  double ds = 0.01;
  double s_span = 10.0;
  // physical
  double dt_safety = 0.2;
  double dt_max = 1e-3;
  double M_stop = 1e8;
  double t_max = 10.0;
};

struct RunConfig {
  Params params;
  Scenario scenario = Scenario::verify;
  std::uint64_t seed = 0;
  /// Run directory, relative to BLOWUP_OUTPUT_ROOT when that is set.
  std::string output = "blowup_out";
  InitialSpec initial;
  GridSpec grid;
  SolverSpec solver;
  FunctionalConfig functional;
};

/// Parses flat "[section]" blocks of "key = value" lines ('#' and ';' start comments).
/// overrides are "section.key=value" strings applied on top of the document.
/// Keys: [params] p a N; [run] scenario seed output; [initial] kind c amplitude width path;
/// [grid] geometry extent resolution; [solver] rel_tol s_max T ds s_span dt_safety dt_max
/// M_stop t_max; [functional] m0 theta A R. params.p, params.a, params.N and run.scenario
/// are required, except that verify needs no params. Throws ConfigError naming the line
/// (or override) and the offending key.
[[nodiscard]] RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

[[nodiscard]] nlohmann::json to_json(const RunConfig& config);

}  // namespace blowup
