#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "sfwm/errors.hpp"

namespace sfwm::numerics {

// sin(x)/x with the series below 1e-8.
inline double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

struct DerivativeEstimate {
  std::array<double, 5> d{};  // f, f', f'', f''', f''''
  bool converged = false;
  double step = 0.0;          // step picked for f''
};

// Central differences with one Richardson level, swept over h_max * 2^-j down to h_min.
// For each order the pair of neighbouring steps that agree best is kept. Evaluation
// failures (throws from f) drop the offending step.
DerivativeEstimate derivatives(const std::function<double(double)>& f, double x, double h_max,
                               double h_min);

// Root of f on [a, b]; f(a), f(b) must differ in sign (or one is zero).
double find_root(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 double xtol, int max_iter = 200);

// Every sign change of f over a uniform scan, refined. Zeros hit exactly at a
// sample are reported once.
std::vector<double> scan_roots(const std::function<double(double)>& f, double a, double b,
                               int samples, double xtol);

// Gauss-Legendre 16-point rule on [-1, 1].
const std::array<double, 16>& gl_nodes();
const std::array<double, 16>& gl_weights();

template <class F>
auto gl_panel(F&& f, double a, double b) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  const auto& x = gl_nodes();
  const auto& w = gl_weights();
  decltype(f(a)) acc{};
  for (std::size_t k = 0; k < x.size(); ++k) acc += w[k] * f(mid + half * x[k]);
  return acc * half;
}

namespace detail {
template <class F, class T>
T adapt(F& f, double a, double b, T whole, double tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const T left = gl_panel(f, a, m), right = gl_panel(f, m, b);
  const T split = left + right;
  // round-off floor: panels cannot agree better than a few ulps of their magnitude
  const double floor = 64.0 * 2.2e-16 * (std::abs(left) + std::abs(right));
  if (std::abs(split - whole) <= std::max(tol, floor)) return split;
  if (depth >= max_depth)
    fail(ErrorKind::QuadratureNonConvergence, "adaptive Gauss-Legendre hit max panel depth");
  return adapt(f, a, m, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, m, b, right, 0.5 * tol, depth + 1, max_depth);
}
}  // namespace detail

// Adaptive bisection of Gauss-Legendre panels, absolute tolerance over [a, b].
template <class F>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 24,
                        int initial_panels = 4) {
  using T = decltype(f(a));
  T total{};
  const double w = (b - a) / initial_panels;
  for (int p = 0; p < initial_panels; ++p) {
    const double lo = a + p * w, hi = lo + w;
    total += detail::adapt(f, lo, hi, gl_panel(f, lo, hi), abs_tol / initial_panels, 0, max_depth);
  }
  return total;
}

// Chebyshev interpolant of a smooth scalar function on [a, b].
class Chebyshev {
 public:
  Chebyshev() = default;
  Chebyshev(const std::function<double(double)>& f, double a, double b, int n);
  double operator()(double x) const;
  double lo() const { return a_; }
  double hi() const { return b_; }
  const std::vector<double>& coefficients() const { return c_; }

 private:
  double a_ = 0.0, b_ = 0.0;
  std::vector<double> c_;
};

}  // namespace sfwm::numerics
