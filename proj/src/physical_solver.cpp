#include "blowup/physical_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/ode_blowup.hpp"
#include "imex.hpp"

namespace blowup {

namespace {

void check_finite(const std::vector<double>& v, double t) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << "physical step: non-finite value at node " << i << " (t = " << t << ")";
      throw BlowupOvershoot(os.str());
    }
  }
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Step bound from the ODE timescale M / f(M).
double reaction_dt(double M, const Params& params, double dt_max) {
  if (M <= 0.0) return dt_max;
  const double fM = std::abs(eval_f(M, params));
  if (fM == 0.0 || !std::isfinite(fM)) return fM == 0.0 ? dt_max : 0.0;
  return std::min(dt_max, M / fM);
}

// Compensated accumulation of t, so that steps far below ulp(t) are not lost.
struct KahanTime {
  double sum;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

GridField step_with(const Tridiagonal& L, const GridField& field, const Params& params, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ContractError("physical step: dt must be positive and finite");
  }
  auto reaction = [&](double, std::span<const double> u, std::vector<double>& out) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      out[i] = std::isfinite(u[i]) ? eval_f(u[i], params) : u[i];
    }
  };
  GridField next{field.mesh, detail::ars222_step(L, field.values, field.time, dt, reaction),
                 field.time + dt};
  check_finite(next.values, next.time);
  return next;
}

}  // namespace

std::string to_string(RunStatus status) {
  return status == RunStatus::blowup ? "blowup" : "no blow-up detected";
}

GridField step(const GridField& field, const Params& params, double dt) {
  return step_with(laplacian(field.mesh), field, params, dt);
}

PhysicalRunResult run_to_blowup(const GridField& u0, const Params& params,
                                const PhysicalRunOptions& options) {
  validate(params);
  if (!(options.M_stop >= 1e6)) throw ConfigError("run_to_blowup: M_stop must be >= 1e6");
  if (!(options.dt_safety > 0.0 && options.dt_max > 0.0 && options.t_max > 0.0)) {
    throw ConfigError("run_to_blowup: dt_safety, dt_max and t_max must be positive");
  }
  const Tridiagonal L = laplacian(u0.mesh);

  PhysicalRunResult result;
  GridField field = u0;
  KahanTime clock{u0.time};
  double M = sup_abs(field.values);
  result.sup_history.push_back({field.time, M});

  while (true) {
    if (M >= options.M_stop) {
      result.status = RunStatus::blowup;
      break;
    }
    if (clock.sum >= options.t_max || M < options.decay_floor) {
      result.status = RunStatus::no_blowup;
      break;
    }
    double dt = options.dt_safety * reaction_dt(M, params, options.dt_max);
    dt = std::min(dt, options.t_max - clock.sum);
    field = step_with(L, field, params, dt);
    clock.add(dt);
    field.time = clock.sum;
    result.last_dt = dt;
    M = sup_abs(field.values);
    result.sup_history.push_back({field.time, M});
    if (options.observer) options.observer(field);
  }

  if (result.status == RunStatus::blowup) {
    result.T_hat = field.time + time_to_blowup(M, params);
  }
  // Parabolic refinement of the argmax.
  const auto& v = field.values;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  }
  double x0 = field.mesh.coordinate(imax);
  if (imax > 0 && imax + 1 < v.size()) {
    const double um = std::abs(v[imax - 1]);
    const double uc = std::abs(v[imax]);
    const double up = std::abs(v[imax + 1]);
    const double denom = um - 2.0 * uc + up;
    if (denom < 0.0) x0 += 0.5 * (um - up) / denom * field.mesh.spacing();
  } else if (imax == 0 && field.mesh.geometry == Geometry::radial) {
    x0 = 0.0;
  }
  result.x0_hat = x0;
  result.final_field = std::move(field);
  return result;
}

GridField advance_to(const GridField& u0, const Params& params, double t_end, double dt_max,
                     double dt_safety) {
  const Tridiagonal L = laplacian(u0.mesh);
  GridField field = u0;
  const double t0 = u0.time;
  double elapsed = 0.0;
  const double span = t_end - t0;
  while (elapsed < span) {
    const double M = sup_abs(field.values);
    double dt = std::min(dt_max, dt_safety * reaction_dt(M, params, dt_max / dt_safety));
    if (elapsed + dt >= span * (1.0 - 1e-14)) dt = span - elapsed;
    field = step_with(L, field, params, dt);
    elapsed += dt;
    field.time = t0 + elapsed;
  }
  field.time = t_end;
  return field;
}

}  // namespace blowup
