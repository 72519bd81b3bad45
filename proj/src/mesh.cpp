#include "blowup/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

double Mesh::spacing() const noexcept {
  const double length = geometry == Geometry::line ? 2.0 * extent : extent;
  return length / static_cast<double>(nodes - 1);
}

double Mesh::coordinate(std::size_t i) const noexcept {
  if (i + 1 == nodes) return extent;
  return lower() + spacing() * static_cast<double>(i);
}

std::vector<double> Mesh::coordinates() const {
  std::vector<double> x(nodes);
  for (std::size_t i = 0; i < nodes; ++i) x[i] = coordinate(i);
  return x;
}

Mesh make_mesh(Geometry geometry, int dimension, double extent, std::size_t nodes,
               std::size_t min_nodes) {
  std::ostringstream err;
  if (nodes < min_nodes) err << "mesh: node count " << nodes << " below minimum " << min_nodes;
  else if (!(extent > 0.0) || !std::isfinite(extent)) err << "mesh: extent must be positive";
  else if (dimension < 1) err << "mesh: dimension must be >= 1";
  else if (geometry == Geometry::line && dimension != 1) err << "mesh: line geometry needs N = 1";
  if (!err.str().empty()) throw ConfigError(err.str());
  return Mesh{geometry, dimension, extent, nodes};
}

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

Tridiagonal laplacian(const Mesh& mesh) {
  const std::size_t n = mesh.nodes;
  const double h = mesh.spacing();
  const double ih2 = 1.0 / (h * h);
  Tridiagonal L{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                std::vector<double>(n, 0.0)};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double drift = 0.0;
    if (mesh.geometry == Geometry::radial) {
      drift = (mesh.dimension - 1) / (mesh.coordinate(i) * 2.0 * h);
    }
    L.lower[i] = ih2 - drift;
    L.diag[i] = -2.0 * ih2;
    L.upper[i] = ih2 + drift;
  }
  // Neumann ghosts u_{-1} = u_1 and u_n = u_{n-2}; the first-derivative term vanishes there.
  const double origin_factor = mesh.geometry == Geometry::radial ? mesh.dimension : 1.0;
  L.diag[0] = -2.0 * ih2 * origin_factor;
  L.upper[0] = 2.0 * ih2 * origin_factor;
  L.diag[n - 1] = -2.0 * ih2;
  L.lower[n - 1] = 2.0 * ih2;
  return L;
}

void solve_shifted(const Tridiagonal& L, double c, std::span<const double> rhs, std::span<double> x) {
  const std::size_t n = L.size();
  std::vector<double> cp(n);
  std::vector<double> dp(n);
  double b = 1.0 - c * L.diag[0];
  if (b == 0.0) throw NumericError("tridiagonal solve: zero pivot at row 0");
  cp[0] = -c * L.upper[0] / b;
  dp[0] = rhs[0] / b;
  for (std::size_t i = 1; i < n; ++i) {
    const double a = -c * L.lower[i];
    b = 1.0 - c * L.diag[i] - a * cp[i - 1];
    if (b == 0.0) {
      std::ostringstream os;
      os << "tridiagonal solve: zero pivot at row " << i;
      throw NumericError(os.str());
    }
    cp[i] = (i + 1 < n) ? -c * L.upper[i] / b : 0.0;
    dp[i] = (rhs[i] - a * dp[i - 1]) / b;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
}

std::vector<double> gradient(const Mesh& mesh, std::span<const double> v) {
  const std::size_t n = mesh.nodes;
  const double h = mesh.spacing();
  std::vector<double> g(n);
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  if (mesh.geometry == Geometry::radial) {
    g[0] = 0.0;
  } else {
    g[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  }
  g[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return g;
}

bool interpolate_cubic(const Mesh& mesh, std::span<const double> v, double x, double& out) {
  const std::size_t n = mesh.nodes;
  const double h = mesh.spacing();
  if (mesh.geometry == Geometry::radial) x = std::abs(x);
  const double lo = mesh.lower();
  const double slack = 1e-12 * mesh.extent;
  if (x < lo - slack || x > mesh.extent + slack) return false;
  x = std::clamp(x, lo, mesh.extent);

  const double pos = (x - lo) / h;
  auto base = static_cast<long>(std::floor(pos)) - 1;
  // Sample with mirroring across the radial origin; clamp the stencil inside the line mesh.
  auto sample = [&](long j) {
    if (mesh.geometry == Geometry::radial && j < 0) j = -j;
    return v[static_cast<std::size_t>(j)];
  };
  const long last = static_cast<long>(n) - 1;
  const long min_base = mesh.geometry == Geometry::radial ? -1 : 0;
  base = std::clamp(base, min_base, last - 3);
  const double t = pos - static_cast<double>(base);
  // Lagrange weights on offsets 0,1,2,3.
  const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  out = w0 * sample(base) + w1 * sample(base + 1) + w2 * sample(base + 2) + w3 * sample(base + 3);
  return true;
}

}  // namespace blowup
