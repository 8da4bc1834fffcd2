#include "sfwm/jsa.hpp"

#include <algorithm>
#include <cmath>

#include "sfwm/errors.hpp"
#include "sfwm/numerics.hpp"
#include "sfwm/special.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

double dsign(Direction d) { return d == Direction::Forward ? 1.0 : -1.0; }

// Chebyshev stand-in for k(c + nu) - k(c) of one mode in the detuning nu. Working in
// detunings keeps L dk/2 free of the round-off carried by the absolute k and omega.
numerics::Chebyshev cache_k(const FiberModel& fiber, const ModeId& mode, double c, double lo,
                            double hi) {
  const double kc = propagation_constant(fiber, mode, c);
  auto k = [&](double nu) { return propagation_constant(fiber, mode, c + nu) - kc; };
  const double pad = 1e-9 + 1e-6 * (hi - lo);
  lo -= pad;
  hi += pad;
  numerics::Chebyshev best;
  for (int n = 16; n <= 512; n *= 2) {
    numerics::Chebyshev cheb(k, lo, hi, n);
    double err = 0.0, scale = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double nu = lo + (hi - lo) * (j + 0.37) / 7.0;
      const double ref = k(nu);
      err = std::max(err, std::abs(cheb(nu) - ref));
      scale = std::max(scale, std::abs(ref));
    }
    best = std::move(cheb);
    if (err < 1e-14 * (1.0 + scale)) break;
  }
  return best;
}

// Mismatch and kappa as constants at the wave centres plus cached detuning parts.
struct MismatchCache {
  numerics::Chebyshev p1, p2, s, i;
  double d1, d2, ds, di;
  double dk0, kappa0;
  double delta_k(double u1, double u2, double us, double ui) const {
    return dk0 + d1 * p1(u1) + d2 * p2(u2) - ds * s(us) - di * i(ui);
  }
  // kappa - kappa0
  double kappa_shift(double u1, double u2, double us, double ui) const {
    return p1(u1) + p2(u2) + s(us) + i(ui);
  }
};

// Detuning ranges touched by the convolution integral over the grid.
struct ConvolutionBox {
  double sigma_eff, f1;  // u0 = f1 * N
  double u_lo, u_hi;     // u = omega - omega10
  double v_lo, v_hi;     // v = omega2 - omega20 = N - u
  double dN;             // N = nu_s + nu_i + dN
};

ConvolutionBox convolution_box(const PumpSpec& p1, const PumpSpec& p2, const JsaAxes& a,
                               double span) {
  ConvolutionBox b;
  const double s1 = p1.sigma * p1.sigma, s2 = p2.sigma * p2.sigma;
  b.sigma_eff = p1.sigma * p2.sigma / std::sqrt(s1 + s2);
  b.f1 = s1 / (s1 + s2);
  b.dN = a.omega_s0 + a.omega_i0 - p1.omega0 - p2.omega0;
  const double n_lo = a.nu_s.front() + a.nu_i.front() + b.dN, n_hi = a.nu_s.back() + a.nu_i.back() + b.dN;
  b.u_lo = b.f1 * n_lo - span * b.sigma_eff;
  b.u_hi = b.f1 * n_hi + span * b.sigma_eff;
  b.v_lo = (1.0 - b.f1) * n_lo - span * b.sigma_eff;
  b.v_hi = (1.0 - b.f1) * n_hi + span * b.sigma_eff;
  return b;
}

MismatchCache build_cache(const FiberModel& fiber, const ProcessSpec& p, const PumpSpec& p1,
                          const PumpSpec& p2, const ConvolutionBox& b, const JsaAxes& a) {
  MismatchCache c{cache_k(fiber, p.pump1.mode, p1.omega0, b.u_lo, b.u_hi),
                  cache_k(fiber, p.pump2.mode, p2.omega0, b.v_lo, b.v_hi),
                  cache_k(fiber, p.signal.mode, a.omega_s0, a.nu_s.front(), a.nu_s.back()),
                  cache_k(fiber, p.idler.mode, a.omega_i0, a.nu_i.front(), a.nu_i.back()),
                  dsign(p.pump1.direction),
                  dsign(p.pump2.direction),
                  dsign(p.signal.direction),
                  dsign(p.idler.direction),
                  0.0,
                  0.0};
  const double k1 = propagation_constant(fiber, p.pump1.mode, p1.omega0);
  const double k2 = propagation_constant(fiber, p.pump2.mode, p2.omega0);
  const double ks = propagation_constant(fiber, p.signal.mode, a.omega_s0);
  const double ki = propagation_constant(fiber, p.idler.mode, a.omega_i0);
  c.dk0 = c.d1 * k1 + c.d2 * k2 - c.ds * ks - c.di * ki - nonlinear_phase(fiber, p);
  c.kappa0 = k1 + k2 + ks + ki;
  return c;
}

void check_pumps(const PumpSpec& p1, const PumpSpec& p2) {
  p1.validate();
  p2.validate();
}

JsaGrid empty_grid(const JsaAxes& a, JsaRegime r) {
  JsaGrid g;
  g.nu_s = a.nu_s;
  g.nu_i = a.nu_i;
  g.omega_s0 = a.omega_s0;
  g.omega_i0 = a.omega_i0;
  g.regime = r;
  return g;
}

// Shared convolution driver for the co- and counter-propagating regimes.
JsaGrid convolve(const FiberModel& fiber, const ProcessSpec& process, const PumpSpec& p1,
                 const PumpSpec& p2, const JsaAxes& axes, const QuadratureOptions& opt,
                 bool counter) {
  check_pumps(p1, p2);
  axes.validate();
  const double L = fiber.length_m * units::kMetersToMicrons;
  const auto box = convolution_box(p1, p2, axes, opt.span_widths);
  const auto cache = build_cache(fiber, process, p1, p2, box, axes);
  const double tau = counter ? p2.delay_fs - p1.delay_fs : 0.0;
  const cplx kappa_phase = std::polar(1.0, std::fmod(0.5 * L * cache.kappa0, 2.0 * units::kPi));

  auto integrand = [&](double u, double nu_s, double nu_i) {
    const double v = nu_s + nu_i + box.dN - u;
    const double half = 0.5 * L * cache.delta_k(u, v, nu_s, nu_i);
    cplx val = pump_envelope(p1, u) * pump_envelope(p2, v) * numerics::sinc(half);
    if (counter)
      val *= kappa_phase * std::polar(1.0, 0.5 * L * cache.kappa_shift(u, v, nu_s, nu_i) + u * tau);
    else
      val *= std::polar(1.0, half);
    return val;
  };

  // Panel count from the fastest phase rotation of the integrand at the grid centre.
  const double nus_c = 0.5 * (axes.nu_s.front() + axes.nu_s.back());
  const double nui_c = 0.5 * (axes.nu_i.front() + axes.nu_i.back());
  const double n_c = nus_c + nui_c + box.dN;
  const double u_c = box.f1 * n_c;
  const double h = box.sigma_eff;
  auto slope = [&](auto fn) { return std::abs(fn(u_c + h) - fn(u_c - h)) / (2.0 * h); };
  double rate = 0.5 * L * slope([&](double u) { return cache.delta_k(u, n_c - u, nus_c, nui_c); });
  if (counter) {
    rate += 0.5 * L * slope([&](double u) { return cache.kappa_shift(u, n_c - u, nus_c, nui_c); });
    rate += std::abs(tau);
  } else {
    rate *= 2.0;  // sinc and phase factor each rotate at L dk/2
  }
  const double u_span = 2.0 * opt.span_widths * box.sigma_eff;
  rate += 2.0 * (std::abs(p1.chirp_fs2) + std::abs(p2.chirp_fs2)) *
          (std::max(std::abs(box.u_lo), std::abs(box.u_hi)) + u_span);
  const int panels = std::clamp(static_cast<int>(std::ceil(u_span * rate / units::kPi)) + 4, 4, 4096);

  const double peak = std::sqrt(2.0 / units::kPi) / std::sqrt(p1.sigma * p2.sigma) *
                      box.sigma_eff * std::sqrt(units::kPi);
  const double tol = opt.rel_tol * peak;

  JsaGrid g = empty_grid(axes, counter ? JsaRegime::CounterPropagating : JsaRegime::Full);
  kernels::fill(opt.exec, g.amp, g.ns(), g.ni(), [&](std::size_t is, std::size_t ii) {
    const double nu_s = axes.nu_s[is], nu_i = axes.nu_i[ii];
    const double u0 = box.f1 * (nu_s + nu_i + box.dN);
    const double a = u0 - opt.span_widths * box.sigma_eff, b = u0 + opt.span_widths * box.sigma_eff;
    return numerics::integrate_adaptive([&](double u) { return integrand(u, nu_s, nu_i); }, a, b,
                                        tol, opt.max_depth, panels);
  });
  return g;
}

}  // namespace

void PumpSpec::validate() const {
  if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "pump sigma must be > 0");
  if (!(omega0 > 0.0)) fail(ErrorKind::InvalidArgument, "pump omega0 must be > 0");
  if (power_w < 0.0) fail(ErrorKind::InvalidArgument, "pump power must be >= 0");
}

std::string to_string(JsaRegime r) {
  switch (r) {
    case JsaRegime::Full: return "full";
    case JsaRegime::Linearized: return "linearized";
    case JsaRegime::Walkoff: return "walkoff";
    case JsaRegime::WalkoffGaussian: return "walkoff_gaussian";
    case JsaRegime::CounterPropagating: return "counterprop";
  }
  return "full";
}

JsaRegime parse_regime(const std::string& s) {
  for (auto r : {JsaRegime::Full, JsaRegime::Linearized, JsaRegime::Walkoff,
                 JsaRegime::WalkoffGaussian, JsaRegime::CounterPropagating})
    if (to_string(r) == s) return r;
  fail(ErrorKind::ConfigError, "unknown JSA regime '" + s + "'");
}

void JsaAxes::validate() const {
  for (const auto* ax : {&nu_s, &nu_i}) {
    if (ax->size() < 2) fail(ErrorKind::InvalidArgument, "JSA axes need at least 2 samples");
    const double d = (*ax)[1] - (*ax)[0];
    if (!(d > 0.0)) fail(ErrorKind::InvalidArgument, "JSA axes must be strictly increasing");
    for (std::size_t k = 1; k < ax->size(); ++k)
      if (std::abs((*ax)[k] - (*ax)[k - 1] - d) > 1e-9 * d)
        fail(ErrorKind::InvalidArgument, "JSA axes must be uniform");
  }
}

JsaAxes uniform_axes(double omega_s0, double omega_i0, double half_span_s, double half_span_i,
                     std::size_t n_s, std::size_t n_i) {
  if (n_s < 2 || n_i < 2) fail(ErrorKind::InvalidArgument, "JSA axes need at least 2 samples");
  JsaAxes a;
  a.omega_s0 = omega_s0;
  a.omega_i0 = omega_i0;
  auto fill = [](std::vector<double>& v, double half, std::size_t n) {
    v.resize(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = -half + 2.0 * half * k / (n - 1);
  };
  fill(a.nu_s, half_span_s, n_s);
  fill(a.nu_i, half_span_i, n_i);
  return a;
}

JsaAxes default_axes(const GroupDelayTerms& t, const PumpSpec& p1, const PumpSpec& p2,
                     std::size_t n) {
  // |F| ~ exp(-nu^T M nu): pump term plus sinc(x/2) ~ exp(-0.193 x^2 / 4)
  const double a = 1.0 / (p1.sigma * p1.sigma + p2.sigma * p2.sigma);
  const double g = 0.193 / 4.0;
  const double mss = a + g * t.T_s * t.T_s, mii = a + g * t.T_i * t.T_i, msi = a + g * t.T_s * t.T_i;
  const double det = mss * mii - msi * msi;
  double ws, wi;
  if (det > 1e-12 * mss * mii) {
    ws = std::sqrt(mii / det);
    wi = std::sqrt(mss / det);
  } else {
    ws = wi = std::sqrt(1.0 / a);
  }
  return uniform_axes(t.centers.omega_s, t.centers.omega_i(), 4.0 * ws, 4.0 * wi, n, n);
}

double JsaGrid::norm2() const {
  double s = 0.0;
  for (const auto& v : amp) s += std::norm(v);
  return s * dnu_s() * dnu_i();
}

cplx pump_envelope(const PumpSpec& p, double nu) {
  const double norm = std::pow(2.0 / units::kPi, 0.25) / std::sqrt(p.sigma);
  return norm * std::exp(-nu * nu / (p.sigma * p.sigma)) * std::polar(1.0, p.chirp_fs2 * nu * nu);
}

cplx pump_convolution(const PumpSpec& p1, const PumpSpec& p2, double N) {
  // int exp(-a1 u^2 - a2 (N-u)^2) du = sqrt(pi/(a1+a2)) exp(-a1 a2 N^2/(a1+a2))
  const cplx a1(1.0 / (p1.sigma * p1.sigma), -p1.chirp_fs2);
  const cplx a2(1.0 / (p2.sigma * p2.sigma), -p2.chirp_fs2);
  const double norm = std::sqrt(2.0 / units::kPi) / std::sqrt(p1.sigma * p2.sigma);
  return norm * std::sqrt(units::kPi / (a1 + a2)) * std::exp(-a1 * a2 * N * N / (a1 + a2));
}

JsaGrid jsa_full(const FiberModel& fiber, const ProcessSpec& process, const PumpSpec& pump1,
                 const PumpSpec& pump2, const JsaAxes& axes, const QuadratureOptions& opt) {
  if (!process.co_propagating())
    fail(ErrorKind::InvalidArgument, "jsa_full needs a co-propagating process");
  return convolve(fiber, process, pump1, pump2, axes, opt, false);
}

JsaGrid jsa_counterprop(const FiberModel& fiber, const ProcessSpec& process,
                        const PumpSpec& pump1, const PumpSpec& pump2, const JsaAxes& axes,
                        const QuadratureOptions& opt) {
  if (process.pump1.direction != Direction::Forward || process.pump2.direction != Direction::Backward)
    fail(ErrorKind::InvalidArgument, "counter-propagating regime needs pump1 forward, pump2 backward");
  return convolve(fiber, process, pump1, pump2, axes, opt, true);
}

double cp_overlap_length_m(const FiberModel& fiber, const ProcessSpec& process,
                           const PumpSpec& pump1, const PumpSpec& pump2) {
  check_pumps(pump1, pump2);
  const double l1 = 2.0 / pump1.sigma / mode_dispersion(fiber, process.pump1.mode, pump1.omega0).k1;
  const double l2 = 2.0 / pump2.sigma / mode_dispersion(fiber, process.pump2.mode, pump2.omega0).k1;
  return 0.5 * (l1 + l2) / units::kMetersToMicrons;
}

JsaGrid jsa_linearized(const GroupDelayTerms& t, const PumpSpec& p1, const PumpSpec& p2,
                       const JsaAxes& axes) {
  check_pumps(p1, p2);
  axes.validate();
  JsaGrid g = empty_grid(axes, JsaRegime::Linearized);
  const double dN = axes.omega_s0 + axes.omega_i0 - p1.omega0 - p2.omega0;
  kernels::fill_seq(g.amp, g.ns(), g.ni(), [&](std::size_t is, std::size_t ii) {
    const double x = t.T_s * axes.nu_s[is] + t.T_i * axes.nu_i[ii];
    return pump_convolution(p1, p2, axes.nu_s[is] + axes.nu_i[ii] + dN) * numerics::sinc(0.5 * x) *
           std::polar(1.0, 0.5 * x);
  });
  return g;
}

JsaGrid jsa_dualpump_walkoff(const GroupDelayTerms& t, const PumpSpec& p1, const PumpSpec& p2,
                             const JsaAxes& axes, const WalkoffOptions& opt) {
  check_pumps(p1, p2);
  axes.validate();
  const double s1 = p1.sigma * p1.sigma, s2 = p2.sigma * p2.sigma;
  const double sigma = p1.sigma * p2.sigma / std::sqrt(s1 + s2);
  const double tau = opt.pre_delay_fs.value_or(-0.5 * t.tau_p);
  const double st = sigma * t.tau_p;
  if (st == 0.0 && opt.gaussian_limit)
    fail(ErrorKind::DegenerateTerms, "Gaussian walk-off limit needs tau_p != 0");
  const double c1 = sigma * (tau + t.tau_p) / 2.0, c2 = sigma * tau / 2.0;
  const double dN = axes.omega_s0 + axes.omega_i0 - p1.omega0 - p2.omega0;

  JsaGrid g = empty_grid(axes, opt.gaussian_limit ? JsaRegime::WalkoffGaussian : JsaRegime::Walkoff);
  kernels::fill_seq(g.amp, g.ns(), g.ni(), [&](std::size_t is, std::size_t ii) {
    const double N = axes.nu_s[is] + axes.nu_i[ii] + dN;
    const double x = t.T_s * axes.nu_s[is] + t.T_i * axes.nu_i[ii];
    const double env = std::exp(-N * N / (s1 + s2));
    cplx phi;
    if (st == 0.0) {
      phi = numerics::sinc(0.5 * x) * std::polar(1.0, 0.5 * x);
    } else if (opt.gaussian_limit) {
      const double y = x / st;
      phi = std::exp(-y * y);
    } else {
      const double y = x / st;
      phi = special::erf_shift_scaled(c1, y) - special::erf_shift_scaled(c2, y);
      if (!std::isfinite(phi.real()) || !std::isfinite(phi.imag()))
        fail(ErrorKind::FaddeevaOverflow, "erf term overflowed at cell (" + std::to_string(is) +
                                              ", " + std::to_string(ii) + ")");
    }
    return env * phi;
  });
  return g;
}

JsaGrid normalize_jsi(const JsaGrid& grid) {
  const double n2 = grid.norm2();
  if (!(n2 > 0.0) || !std::isfinite(n2)) fail(ErrorKind::ZeroGrid, "JSA grid has zero norm");
  JsaGrid g = grid;
  const double s = 1.0 / std::sqrt(n2);
  for (auto& v : g.amp) v *= s;
  g.norm_scale = grid.norm_scale * s;
  return g;
}

std::vector<double> jsi(const JsaGrid& grid) {
  std::vector<double> out(grid.amp.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(grid.amp[k]);
  return out;
}

double jsi_orientation(const JsaGrid& grid) {
  double m = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t is = 0; is < grid.ns(); ++is)
    for (std::size_t ii = 0; ii < grid.ni(); ++ii) {
      const double w = std::norm(grid.at(is, ii));
      m += w;
      mx += w * grid.nu_s[is];
      my += w * grid.nu_i[ii];
    }
  if (!(m > 0.0)) fail(ErrorKind::ZeroGrid, "JSI is zero");
  mx /= m;
  my /= m;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t is = 0; is < grid.ns(); ++is)
    for (std::size_t ii = 0; ii < grid.ni(); ++ii) {
      const double w = std::norm(grid.at(is, ii));
      const double dx = grid.nu_s[is] - mx, dy = grid.nu_i[ii] - my;
      sxx += w * dx * dx;
      syy += w * dy * dy;
      sxy += w * dx * dy;
    }
  double deg = 0.5 * std::atan2(2.0 * sxy, sxx - syy) * 180.0 / units::kPi;
  if (deg <= -90.0) deg += 180.0;
  return deg;
}

}  // namespace sfwm
