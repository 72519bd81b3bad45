#include "blowup/similarity_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/errors.hpp"
#include "imex.hpp"

namespace blowup {

namespace {

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double similarity_start(double T) noexcept { return std::max(-std::log(T), 2.0); }

QuadratureRule rule_for(const Mesh& mesh) {
  const auto mode = mesh.geometry == Geometry::line ? QuadratureMode::line : QuadratureMode::radial;
  return build_rule(mesh.dimension, mode, static_cast<int>(mesh.nodes), mesh.extent);
}

void require_matching(const Mesh& mesh, const QuadratureRule& rule) {
  const bool mode_ok = (mesh.geometry == Geometry::line) == (rule.mode == QuadratureMode::line);
  const double tol = 1e-12 * mesh.extent;
  const bool nodes_ok = rule.size() == mesh.nodes && rule.dimension == mesh.dimension &&
                        std::abs(rule.nodes.front() - mesh.lower()) <= tol &&
                        std::abs(rule.nodes.back() - mesh.extent) <= tol;
  if (!mode_ok || !nodes_ok) {
    std::ostringstream os;
    os << "grid mismatch: mesh with " << mesh.nodes << " nodes on extent " << mesh.extent
       << " does not coincide with the quadrature rule (" << rule.size() << " nodes, R_max "
       << rule.truncation_radius << ")";
    throw ContractError(os.str());
  }
}

SimField to_similarity(const GridField& u, double x0, double T, const Params& params,
                       const Mesh& target) {
  const double tau = T - u.time;
  const double psi = psi_of_tau(tau, params);
  if (u.mesh.geometry == Geometry::radial && x0 != 0.0) {
    throw DomainError("to_similarity: radial fields are centred at x0 = 0");
  }
  const double scale = std::sqrt(tau);
  SimField w{target, std::vector<double>(target.nodes), -std::log(tau), params};
  for (std::size_t i = 0; i < target.nodes; ++i) {
    const double x = x0 + target.coordinate(i) * scale;
    double value = 0.0;
    if (!interpolate_cubic(u.mesh, u.values, x, value)) {
      std::ostringstream os;
      os << "to_similarity: y = " << target.coordinate(i) << " maps to x = " << x
         << " outside the physical mesh [" << u.mesh.lower() << ", " << u.mesh.extent << "]";
      throw TruncationError(os.str());
    }
    w.values[i] = value / psi;
  }
  return w;
}

GridField from_similarity(const SimField& w, double x0, double T, const Mesh& target) {
  const double tau = std::exp(-w.s);
  const double psi = psi_of_tau(tau, w.params);
  const double scale = std::sqrt(tau);
  GridField u{target, std::vector<double>(target.nodes), T - tau};
  for (std::size_t i = 0; i < target.nodes; ++i) {
    const double y = (target.coordinate(i) - x0) / scale;
    double value = 0.0;
    if (!interpolate_cubic(w.mesh, w.values, y, value)) {
      std::ostringstream os;
      os << "from_similarity: x = " << target.coordinate(i) << " maps to y = " << y
         << " outside the similarity mesh";
      throw TruncationError(os.str());
    }
    u.values[i] = psi * value;
  }
  return u;
}

double drift_step_bound(const Mesh& mesh, double cfl) {
  return cfl * mesh.spacing() / (0.5 * mesh.extent);
}

void explicit_rhs(const SimField& field, double s, std::span<const double> w, std::span<double> out) {
  const Mesh& mesh = field.mesh;
  const Params& params = field.params;
  const std::size_t n = mesh.nodes;
  const double h = mesh.spacing();
  const double linear = (1.0 - params.a / s) / (params.p - 1.0);
  const bool radial = mesh.geometry == Geometry::radial;
  auto at = [&](long j) {
    if (radial && j < 0) j = -j;
    return w[static_cast<std::size_t>(j)];
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double y = mesh.coordinate(i);
    const auto j = static_cast<long>(i);
    // Second-order upwind for the outward transport speed y/2.
    double dw = 0.0;
    if (y > 0.0) {
      dw = (3.0 * at(j) - 4.0 * at(j - 1) + at(j - 2)) / (2.0 * h);
    } else if (y < 0.0) {
      dw = (-3.0 * at(j) + 4.0 * at(j + 1) - at(j + 2)) / (2.0 * h);
    }
    out[i] = -0.5 * y * dw - linear * w[i] + rescaled_nonlinearity(s, w[i], params);
  }
}

SimField step_w(const SimField& field, double ds) {
  if (!(ds > 0.0) || !std::isfinite(ds)) throw ContractError("step_w: ds must be positive");
  const double bound = drift_step_bound(field.mesh);
  if (ds > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step_w: ds = " << ds << " exceeds the drift CFL bound " << bound;
    throw ContractError(os.str());
  }
  const Tridiagonal L = laplacian(field.mesh);
  auto rhs = [&](double s, std::span<const double> w, std::vector<double>& out) {
    explicit_rhs(field, s, w, out);
  };
  SimField next{field.mesh, detail::ars222_step(L, field.values, field.s, ds, rhs), field.s + ds,
                field.params};
  for (std::size_t i = 0; i < next.values.size(); ++i) {
    if (!std::isfinite(next.values[i])) {
      std::ostringstream os;
      os << "step_w: non-finite value at node " << i << " (s = " << next.s << ")";
      throw NumericError(os.str());
    }
  }
  return next;
}

double ds_dissipation(const SimField& before, const SimField& after, const QuadratureRule& rule) {
  if (!(before.mesh == after.mesh)) throw ContractError("ds_dissipation: grid mismatch");
  require_matching(before.mesh, rule);
  const double ds = after.s - before.s;
  if (!(ds > 0.0)) throw ContractError("ds_dissipation: requires after.s > before.s");
  std::vector<double> g(before.values.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rate = (after.values[i] - before.values[i]) / ds;
    g[i] = rate * rate;
  }
  return integrate(rule, g);
}

SimField evolve(const SimField& w0, double s_end, const EvolveOptions& options) {
  if (!(options.ds > 0.0)) throw ConfigError("evolve: ds must be positive");
  const double bound = drift_step_bound(w0.mesh, options.cfl);
  const Tridiagonal L = laplacian(w0.mesh);
  auto rhs = [&](double s, std::span<const double> w, std::vector<double>& out) {
    explicit_rhs(w0, s, w, out);
  };

  SimField field = w0;
  const double s_start = w0.s;
  const auto macro_steps = static_cast<long>(std::ceil((s_end - s_start) / options.ds - 1e-9));
  const auto sub = static_cast<long>(std::ceil(options.ds / bound - 1e-12));
  const double sub_ds = options.ds / static_cast<double>(std::max(1L, sub));
  for (long k = 0; k < macro_steps; ++k) {
    const double s_next = std::min(s_start + options.ds * static_cast<double>(k + 1), s_end);
    SimField next = field;
    const double span = s_next - field.s;
    const auto parts = static_cast<long>(std::ceil(span / sub_ds - 1e-9));
    const double h = span / static_cast<double>(std::max(1L, parts));
    for (long j = 0; j < parts; ++j) {
      next.values = detail::ars222_step(L, next.values, next.s, h, rhs);
      next.s = field.s + h * static_cast<double>(j + 1);
    }
    next.s = s_next;
    for (std::size_t i = 0; i < next.values.size(); ++i) {
      if (!std::isfinite(next.values[i])) {
        std::ostringstream os;
        os << "evolve: non-finite value at node " << i << " (s = " << next.s << ")";
        throw NumericError(os.str());
      }
    }
    if (options.on_step) options.on_step(field, next);
    field = std::move(next);
    const double sup = sup_abs(field.values);
    if (sup > options.escape_bound || sup < options.decay_bound) break;
  }
  return field;
}

ThresholdResult tune_threshold(const SimField& shape, double s_end, double reference,
                               const EvolveOptions& options, double rel_width) {
  EvolveOptions quiet = options;
  quiet.on_step = nullptr;
  quiet.escape_bound = 4.0 * reference;
  quiet.decay_bound = 0.25 * reference;
  auto above = [&](double lambda) {
    SimField w = shape;
    for (double& x : w.values) x *= lambda;
    const SimField end = evolve(w, s_end, quiet);
    return sup_abs(end.values) > reference;
  };
  double lo = 1.0;
  double hi = 1.0;
  if (above(1.0)) {
    do {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-6) throw NumericError("tune_threshold: no decaying amplitude found");
    } while (above(lo));
  } else {
    do {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e6) throw NumericError("tune_threshold: no escaping amplitude found");
    } while (!above(hi));
  }
  int it = 0;
  while (it < 200 && hi - lo > rel_width * hi) {
    const double mid = 0.5 * (lo + hi);
    if (above(mid)) hi = mid;
    else lo = mid;
    ++it;
  }
  return {lo, hi - lo, it};
}

}  // namespace blowup
