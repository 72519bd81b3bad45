#pragma once

#include <cmath>
#include <functional>

// Reference computations that share no code with the library.
namespace oracle {

inline long double f(long double u, long double p, long double a) {
  const long double m = std::fabs(u);
  if (m == 0.0L) return 0.0L;
  return std::pow(m, p - 1.0L) * u * std::pow(std::log(2.0L + u * u), a);
}

// Composite Simpson in long double.
inline long double simpson(const std::function<long double(long double)>& g, long double lo, long double hi,
                           int panels = 20000) {
  const long double h = (hi - lo) / panels;
  long double sum = g(lo) + g(hi);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0L : 2.0L) * g(lo + i * h);
  return sum * h / 3.0L;
}

inline long double F(long double u, long double p, long double a) {
  return simpson([&](long double v) { return f(v, p, a); }, 0.0L, std::fabs(u));
}

// ∫_M^∞ dv / f(v) with v = M e^{x}, truncated at x = 60.
inline long double time_to_blowup(long double M, long double p, long double a) {
  return simpson([&](long double x) { const long double v = M * std::exp(x); return v / f(v, p, a); },
                 0.0L, 60.0L, 200000);
}

inline double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace oracle
