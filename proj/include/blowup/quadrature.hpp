#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace blowup {

enum class QuadratureMode { line, radial };

/// Nodes and weights approximating ∫_{R^N} g(y) ρ(y) dy with ρ(y) = e^{-|y|²/4}.
///
/// Nodes are the uniform mesh the solvers use: y_i = -R + i h on [-R, R] in line
/// mode (N = 1), r_i = i h on [0, R] in radial mode. Weights already contain ρ and,
/// in radial mode, the surface factor |S^{N-1}| r^{N-1}. Line mode and odd-N
/// radial mode use the trapezoidal rule, which is spectrally accurate for these
/// integrands; even-N radial mode adds 7th-order Gregory corrections at r = 0
/// because the integrand r^{N-1} g ρ is odd in r there. In radial mode with N >= 2
/// the origin carries zero weight.
struct QuadratureRule {
  int dimension = 1;
  QuadratureMode mode = QuadratureMode::line;
  std::vector<double> nodes;
  std::vector<double> weights;
  double truncation_radius = 20.0;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
  [[nodiscard]] double spacing() const noexcept;
};

inline constexpr double kDefaultTruncationRadius = 20.0;

/// (4π)^{N/2}, the total mass of ρ.
[[nodiscard]] double gaussian_mass(int N) noexcept;

/// Throws ConfigError for N < 1, resolution < 16, R_max < 10, line mode with N != 1,
/// or when the built rule misses the mass (4π)^{N/2} by more than 1e-10 relative.
[[nodiscard]] QuadratureRule build_rule(int N, QuadratureMode mode, int resolution,
                                        double R_max = kDefaultTruncationRadius);

/// Σ w_i g_i for samples on the rule's nodes. Throws NumericError naming the first
/// non-finite sample and ContractError on a size mismatch.
[[nodiscard]] double integrate(const QuadratureRule& rule, std::span<const double> samples);

/// Σ w_i g(node_i).
[[nodiscard]] double integrate(const QuadratureRule& rule, const std::function<double(double)>& g);

}  // namespace blowup
