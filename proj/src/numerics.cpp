#include "sfwm/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <map>
#include <numbers>
#include <optional>

namespace sfwm::numerics {

namespace {

struct StencilValues {
  double f0, p1, m1, p2, m2;  // f(x), f(x+-h), f(x+-2h)
};

std::array<double, 5> second_order(const StencilValues& v, double h) {
  return {v.f0,
          (v.p1 - v.m1) / (2.0 * h),
          (v.p1 - 2.0 * v.f0 + v.m1) / (h * h),
          (v.p2 - 2.0 * v.p1 + 2.0 * v.m1 - v.m2) / (2.0 * h * h * h),
          (v.p2 - 4.0 * v.p1 + 6.0 * v.f0 - 4.0 * v.m1 + v.m2) / (h * h * h * h)};
}

}  // namespace

DerivativeEstimate derivatives(const std::function<double(double)>& f, double x, double h_max,
                               double h_min) {
  const double f0 = f(x);
  // offsets are h_max * 2^(1-m); cache by m and sign
  std::map<std::pair<int, int>, std::optional<double>> cache;
  auto at = [&](int m, int sign) -> std::optional<double> {
    auto key = std::make_pair(m, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::optional<double> v;
    try {
      const double y = f(x + sign * h_max * std::ldexp(1.0, 1 - m));
      if (std::isfinite(y)) v = y;
    } catch (const Error&) {
    }
    cache.emplace(key, v);
    return v;
  };
  auto stencil = [&](int j) -> std::optional<StencilValues> {
    // step h_j = h_max 2^-j uses m = j+1 (h) and m = j (2h)
    auto p1 = at(j + 1, 1), m1 = at(j + 1, -1), p2 = at(j, 1), m2 = at(j, -1);
    if (!p1 || !m1 || !p2 || !m2) return std::nullopt;
    return StencilValues{f0, *p1, *m1, *p2, *m2};
  };

  std::vector<std::array<double, 5>> rich;
  std::vector<double> steps;
  for (int j = 0; h_max * std::ldexp(1.0, -j) >= h_min; ++j) {
    const double h = h_max * std::ldexp(1.0, -j);
    auto coarse = stencil(j), fine = stencil(j + 1);
    if (!coarse || !fine) {
      if (!rich.empty()) break;
      continue;
    }
    auto dc = second_order(*coarse, h), df = second_order(*fine, 0.5 * h);
    std::array<double, 5> r{};
    for (int n = 0; n < 5; ++n) r[n] = (4.0 * df[n] - dc[n]) / 3.0;
    rich.push_back(r);
    steps.push_back(h);
  }
  if (rich.empty()) fail(ErrorKind::OutOfRange, "no finite-difference stencil fits the valid band");

  DerivativeEstimate out;
  out.d[0] = f0;
  if (rich.size() == 1) {
    out.d = rich[0];
    out.step = steps[0];
    return out;
  }
  out.converged = true;
  const double scale = std::max(std::abs(f0), 1e-300);
  // third and fourth differences sit on the double round-off floor much sooner
  constexpr std::array<double, 5> kRelTol = {0.0, 1e-6, 1e-6, 1e-4, 1e-3};
  for (int n = 1; n < 5; ++n) {
    std::size_t best = 0;
    double best_diff = std::abs(rich[1][n] - rich[0][n]);
    for (std::size_t j = 1; j + 1 < rich.size(); ++j) {
      const double diff = std::abs(rich[j + 1][n] - rich[j][n]);
      if (diff < best_diff) {
        best_diff = diff;
        best = j;
      }
    }
    out.d[n] = rich[best + 1][n];
    const double atol = 1e-8 * scale / std::pow(std::max(std::abs(x), 1e-3), n);
    if (best_diff > kRelTol[n] * std::abs(out.d[n]) + atol) out.converged = false;
    if (n == 2) out.step = steps[best + 1];
  }
  return out;
}

double find_root(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 double xtol, int max_iter) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) fail(ErrorKind::NoRoot, "root bracket has no sign change");
  boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_iter);
  auto tol = [xtol](double lo, double hi) { return std::abs(hi - lo) <= xtol; };
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  // pick the bracket end with the smaller residual
  const double flo = f(r.first), fhi = f(r.second);
  if (flo == 0.0) return r.first;
  if (fhi == 0.0) return r.second;
  const double mid = 0.5 * (r.first + r.second);
  const double fm = f(mid);
  if (std::abs(fm) <= std::min(std::abs(flo), std::abs(fhi))) return mid;
  return std::abs(flo) < std::abs(fhi) ? r.first : r.second;
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double a, double b,
                               int samples, double xtol) {
  std::vector<double> roots;
  double x_prev = a, f_prev = f(a);
  if (f_prev == 0.0) roots.push_back(a);
  for (int s = 1; s < samples; ++s) {
    const double x = a + (b - a) * s / (samples - 1);
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && ((f_prev > 0) != (fx > 0))) {
      roots.push_back(find_root(f, x_prev, x, f_prev, fx, xtol));
    }
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

namespace {
struct GlTable {
  std::array<double, 16> x{}, w{};
  GlTable() {
    using G = boost::math::quadrature::gauss<double, 16>;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t k = 0; k < 8; ++k) {
      x[7 - k] = -ab[k];
      w[7 - k] = wt[k];
      x[8 + k] = ab[k];
      w[8 + k] = wt[k];
    }
  }
};
const GlTable& gl_table() {
  static const GlTable t;
  return t;
}
}  // namespace

const std::array<double, 16>& gl_nodes() { return gl_table().x; }
const std::array<double, 16>& gl_weights() { return gl_table().w; }

Chebyshev::Chebyshev(const std::function<double(double)>& f, double a, double b, int n)
    : a_(a), b_(b), c_(static_cast<std::size_t>(n), 0.0) {
  std::vector<double> fx(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = std::cos(std::numbers::pi * (k + 0.5) / n);
    fx[k] = f(0.5 * (a + b) + 0.5 * (b - a) * t);
  }
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += fx[k] * std::cos(std::numbers::pi * j * (k + 0.5) / n);
    c_[j] = 2.0 * s / n;
  }
  c_[0] *= 0.5;
}

double Chebyshev::operator()(double x) const {
  const double t = (2.0 * x - a_ - b_) / (b_ - a_);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = c_.size(); j-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c_[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c_[0];
}

}  // namespace sfwm::numerics
