#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blowup {

enum class Geometry { line, radial };

/// Uniform mesh on [-X, X] (line) or [0, X] (radial, dimension N).
struct Mesh {
  Geometry geometry = Geometry::line;
  int dimension = 1;
  double extent = 1.0;
  std::size_t nodes = 0;

  [[nodiscard]] double spacing() const noexcept;
  [[nodiscard]] double coordinate(std::size_t i) const noexcept;
  [[nodiscard]] std::vector<double> coordinates() const;
  [[nodiscard]] double lower() const noexcept { return geometry == Geometry::line ? -extent : 0.0; }

  friend bool operator==(const Mesh&, const Mesh&) = default;
};

/// Throws ConfigError unless nodes >= min_nodes, extent > 0 and line meshes have dimension 1.
[[nodiscard]] Mesh make_mesh(Geometry geometry, int dimension, double extent, std::size_t nodes,
                             std::size_t min_nodes = 64);

/// Tridiagonal matrix stored by diagonals; row i is lower[i] x_{i-1} + diag[i] x_i + upper[i] x_{i+1}.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
};

/// Second-order Laplacian with homogeneous Neumann boundaries. Radial rows use
/// u'' + (N-1)u'/r, and N u'' at the origin.
[[nodiscard]] Tridiagonal laplacian(const Mesh& mesh);

/// Solves (I - c L) x = rhs with the Thomas algorithm. Throws NumericError on a zero pivot.
void solve_shifted(const Tridiagonal& L, double c, std::span<const double> rhs, std::span<double> x);

/// Centered first derivative, second-order one-sided stencils at the boundaries and
/// zero at the radial origin.
[[nodiscard]] std::vector<double> gradient(const Mesh& mesh, std::span<const double> values);

/// Piecewise-cubic (4-point Lagrange) interpolation of mesh samples at coordinate x.
/// In radial geometry x is |x| and the profile is mirrored across the origin.
/// Returns false when x lies outside the mesh.
[[nodiscard]] bool interpolate_cubic(const Mesh& mesh, std::span<const double> values, double x,
                                     double& out);

}  // namespace blowup
