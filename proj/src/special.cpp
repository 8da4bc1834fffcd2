#include "sfwm/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "sfwm/errors.hpp"

namespace sfwm::special {

namespace {

constexpr int kTerms = 64;
constexpr double kSqrtPi = 1.7724538509055160273;

// Weideman (1994) rational expansion, coefficients by a direct cosine sum.
struct Weideman {
  double L;
  std::array<double, kTerms> a{};
  Weideman() {
    const int M = 2 * kTerms;
    L = std::sqrt(kTerms / std::sqrt(2.0));
    std::array<double, 2 * M> g{};
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double t = L * std::tan(0.5 * k * std::numbers::pi / M);
      g[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
    }
    for (int n = 1; n <= kTerms; ++n) {
      double s = 0.0;
      for (int k = -M + 1; k <= M - 1; ++k)
        s += g[static_cast<std::size_t>(k + M)] * std::cos(std::numbers::pi * n * k / M);
      a[static_cast<std::size_t>(n - 1)] = s / (2.0 * M);
    }
  }
  cplx operator()(cplx z) const {  // Im z >= 0
    const cplx iz(-z.imag(), z.real());
    const cplx Z = (L + iz) / (L - iz);
    cplx p = 0.0;
    for (int n = kTerms; n-- > 0;) p = p * Z + a[static_cast<std::size_t>(n)];
    const cplx d = 1.0 / (L - iz);
    return 2.0 * p * d * d + d / kSqrtPi;
  }
};

const Weideman& weideman() {
  static const Weideman w;
  return w;
}

cplx asymptotic(cplx z) {  // Im z >= 0, |z| large
  const cplx inv2z2 = 1.0 / (2.0 * z * z);
  cplx term = 1.0, sum = 1.0;
  for (int n = 1; n < 40; ++n) {
    term *= static_cast<double>(2 * n - 1) * inv2z2;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return cplx(0.0, 1.0) / (kSqrtPi * z) * sum;
}

cplx w_upper(cplx z) { return std::abs(z) > 30.0 ? asymptotic(z) : weideman()(z); }

}  // namespace

cplx faddeeva(cplx z) {
  if (z.imag() >= 0.0) return w_upper(z);
  return 2.0 * std::exp(-z * z) - w_upper(-z);
}

cplx erf(cplx z) {
  if (std::abs(z.imag()) > 26.0)
    fail(ErrorKind::FaddeevaOverflow, "complex erf argument has |Im z| > 26");
  if (z.real() < 0.0) return -erf(-z);
  if (std::abs(z) < 0.5) {
    const cplx z2 = z * z;
    cplx term = z, sum = z;
    for (int n = 1; n < 40; ++n) {
      term *= -z2 / static_cast<double>(n);
      const cplx add = term / static_cast<double>(2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 / kSqrtPi * sum;
  }
  const cplx iz(-z.imag(), z.real());
  return 1.0 - std::exp(-z * z) * w_upper(iz);
}

cplx erf_shift_scaled(double c, double y) {
  // exp(-y^2) erf(z), z = c - i y: exp(-y^2) - exp(-c^2 + 2icy) w(y + ic) for c >= 0
  const double gy = std::exp(-y * y);
  const double ac = std::abs(c);
  const double yy = c >= 0.0 ? y : -y;
  const cplx phase = std::exp(cplx(-ac * ac, 2.0 * ac * yy));
  const cplx val = gy - phase * w_upper(cplx(yy, ac));
  return c >= 0.0 ? val : -val;
}

}  // namespace sfwm::special
