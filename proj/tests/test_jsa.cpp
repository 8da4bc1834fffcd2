#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/jsa.hpp"
#include "sfwm/numerics.hpp"

using namespace sfwm;
using namespace fixtures;

namespace {

PumpSpec pump(double w0, double sigma, double chirp = 0.0) {
  PumpSpec p;
  p.omega0 = w0;
  p.sigma = sigma;
  p.chirp_fs2 = chirp;
  return p;
}

// Outer-branch signal frequency of a degenerate single-mode process.
double outer_signal(const FiberModel& f, const ProcessSpec& p, double wp) {
  auto roots = numerics::scan_roots([&](double ws) { return delta_k(f, p, wp, wp, ws); }, wp + 0.05,
                                    wp + 1.0, 400, 1e-13);
  REQUIRE(!roots.empty());
  return roots.back();
}

double max_abs(const JsaGrid& g) {
  double m = 0.0;
  for (auto v : g.amp) m = std::max(m, std::abs(v));
  return m;
}

double max_rel_dev_abs(const JsaGrid& a, const JsaGrid& b) {
  const double ma = max_abs(a), mb = max_abs(b);
  double d = 0.0;
  for (std::size_t k = 0; k < a.amp.size(); ++k)
    d = std::max(d, std::abs(std::abs(a.amp[k]) / ma - std::abs(b.amp[k]) / mb));
  return d;
}

}  // namespace

TEST_CASE("pump envelope: peak, symmetry, chirp, unit norm") {
  const auto p = pump(2.4, 0.03), pc = pump(2.4, 0.03, 500.0);
  CHECK(std::abs(pump_envelope(p, 0.0)) == doctest::Approx(std::pow(2.0 / M_PI, 0.25) / std::sqrt(0.03)).epsilon(1e-14));
  for (double nu : {0.01, 0.02, 0.05}) {
    CHECK(std::norm(pump_envelope(p, nu)) == doctest::Approx(std::norm(pump_envelope(p, -nu))).epsilon(1e-15));
    CHECK(std::abs(pump_envelope(pc, nu)) == doctest::Approx(std::abs(pump_envelope(p, nu))).epsilon(1e-14));
  }
  const double n = numerics::integrate_adaptive([&](double nu) { return std::norm(pump_envelope(pc, nu)); }, -0.3, 0.3, 1e-14);
  CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic pump convolution matches quadrature") {
  const auto p1 = pump(2.4, 0.03, 200.0), p2 = pump(2.1, 0.05, -80.0);
  for (double N : {-0.08, 0.0, 0.03, 0.1}) {
    auto f = [&](double u) { return pump_envelope(p1, u) * pump_envelope(p2, N - u); };
    const cplx q = numerics::integrate_adaptive(f, -0.5, 0.5, 1e-14, 30, 64);
    const cplx a = pump_convolution(p1, p2, N);
    CHECK(std::abs(q - a) < 1e-11);
  }
}

TEST_CASE("dispersionless fiber reduces to the pump convolution") {
  const auto f = taylor_fiber(2.4, {11.69, 4.9});
  const auto p1 = pump(2.4, 0.04), p2 = pump(2.4, 0.04);
  const auto axes = uniform_axes(2.5, 2.3, 0.15, 0.15, 41, 41);
  const auto g = jsa_full(f, single_mode_process(), p1, p2, axes);
  double err = 0.0, peak = 0.0;
  for (std::size_t is = 0; is < g.ns(); ++is)
    for (std::size_t ii = 0; ii < g.ni(); ++ii) {
      const cplx ref = pump_convolution(p1, p2, g.nu_s[is] + g.nu_i[ii]);
      err = std::max(err, std::abs(g.at(is, ii) - ref));
      peak = std::max(peak, std::abs(ref));
    }
  CHECK(err / peak < 1e-8);
}

TEST_CASE("full quadrature matches a direct per-cell integral") {
  const auto f = two_zdw_fiber(0.05);
  const auto proc = single_mode_process();
  const double ws = outer_signal(f, proc, 2.4);
  const auto p1 = pump(2.4, 0.03), p2 = pump(2.4, 0.03);
  const auto axes = uniform_axes(ws, 4.8 - ws, 0.08, 0.08, 9, 9);
  const auto g = jsa_full(f, proc, p1, p2, axes);
  const double L = 0.05e6;
  for (std::size_t is : {0u, 3u, 4u, 8u})
    for (std::size_t ii : {1u, 4u, 6u}) {
      const double s = axes.omega_s0 + axes.nu_s[is], i = axes.omega_i0 + axes.nu_i[ii];
      auto fn = [&](double u) {
        const double w1 = 2.4 + u, w2 = s + i - w1;
        const double h = 0.5 * L * delta_k(f, proc, w1, w2, s);
        return pump_envelope(p1, u) * pump_envelope(p2, w2 - 2.4) * numerics::sinc(h) * std::polar(1.0, h);
      };
      const double c = 0.5 * (s + i - 4.8);
      const cplx ref = numerics::integrate_adaptive(fn, c - 0.25, c + 0.25, 1e-10, 30, 256);
      CHECK(std::abs(g.at(is, ii) - ref) < 1e-8 * max_abs(g));
    }
}

TEST_CASE("full and linearized regimes agree near band centre") {
  const auto f = two_zdw_fiber(0.005);
  const auto proc = single_mode_process();
  const double wp = 2.4, ws = outer_signal(f, proc, wp), sigma = 0.05;
  const auto p1 = pump(wp, sigma), p2 = pump(wp, sigma);
  const auto terms = group_delay_terms(f, proc, {wp, wp, ws}, sigma, sigma);
  CHECK(terms.T_s * terms.T_i < 0.0);
  const auto axes = uniform_axes(ws, 2 * wp - ws, 0.5 * sigma, 0.5 * sigma, 21, 21);
  const auto full = jsa_full(f, proc, p1, p2, axes);
  const auto lin = jsa_linearized(terms, p1, p2, axes);
  double dev = 0.0;
  for (std::size_t k = 0; k < full.amp.size(); ++k) dev = std::max(dev, std::abs(full.amp[k] - lin.amp[k]));
  CHECK(dev / max_abs(lin) < 0.01);
}

TEST_CASE("monochromatic pump collapses the JSI onto the anti-diagonal") {
  const auto f = two_zdw_fiber(0.1);
  const auto proc = single_mode_process();
  const double wp = 2.4, ws = outer_signal(f, proc, wp);
  const auto p = pump(wp, 2e-4);
  const auto g = jsa_full(f, proc, p, p, uniform_axes(ws, 2 * wp - ws, 0.05, 0.05, 81, 81));
  CHECK(jsi_orientation(g) == doctest::Approx(-45.0).epsilon(1.0 / 45.0));
  // the mass sits within a couple of pump widths of nu_s + nu_i = 0
  double m = 0.0, off = 0.0;
  for (std::size_t is = 0; is < g.ns(); ++is)
    for (std::size_t ii = 0; ii < g.ni(); ++ii) {
      const double w = std::norm(g.at(is, ii));
      m += w;
      if (std::abs(g.nu_s[is] + g.nu_i[ii]) > 2e-3) off += w;
    }
  CHECK(off / m < 1e-6);
}

TEST_CASE("linearized JSA: peak at centre and diagonal invariance for T_s = -T_i") {
  GroupDelayTerms t;
  t.T_s = 40.0;
  t.T_i = -40.0;
  const auto p = pump(2.4, 0.05);
  const auto g = jsa_linearized(t, p, p, uniform_axes(2.6, 2.2, 0.2, 0.2, 41, 41));
  CHECK(std::abs(g.at(20, 20)) == doctest::Approx(max_abs(g)).epsilon(1e-14));
  for (std::size_t k = 0; k < 41; ++k) {
    const double nu = g.nu_s[k];
    CHECK(std::abs(g.at(k, k)) == doctest::Approx(std::abs(pump_convolution(p, p, 2 * nu))).epsilon(1e-12));
  }
}

TEST_CASE("JSI orientation follows the phasematching angle") {
  for (auto [ts, ti] : {std::pair{30.0, -10.0}, std::pair{15.0, -45.0}, std::pair{40.0, -40.0}}) {
    GroupDelayTerms t;
    t.T_s = ts;
    t.T_i = ti;
    const auto p = pump(2.4, 20.0);
    const auto g = jsa_linearized(t, p, p, uniform_axes(2.6, 2.2, 1.0, 1.0, 201, 201));
    CHECK(std::abs(jsi_orientation(g) - phasematch_angle(t).theta_sisi_deg) < 1.0);
  }
}

TEST_CASE("walk-off erf form tends to the sinc form as tau_p -> 0") {
  const auto p1 = pump(2.6, 0.05), p2 = pump(2.2, 0.05);
  const double sigma = 0.05 / std::sqrt(2.0);
  GroupDelayTerms t;
  t.T_s = 60.0;
  t.T_i = -40.0;
  t.tau_p = 0.01 / sigma;
  const auto axes = uniform_axes(2.5, 2.3, 0.25, 0.25, 61, 61);
  const auto w = normalize_jsi(jsa_dualpump_walkoff(t, p1, p2, axes));
  const auto s = normalize_jsi(jsa_linearized(t, p1, p2, axes));
  CHECK(max_rel_dev_abs(w, s) < 0.01);
}

TEST_CASE("complete walk-off gives a Gaussian phasematching factor") {
  const auto p1 = pump(2.6, 0.04), p2 = pump(2.2, 0.04);
  const double sigma = 0.04 / std::sqrt(2.0);
  GroupDelayTerms t;
  t.T_s = 300.0;
  t.T_i = -300.0;
  t.tau_p = 20.0 / sigma;
  const auto axes = uniform_axes(2.5, 2.3, 0.12, 0.12, 81, 81);
  const auto exact = normalize_jsi(jsa_dualpump_walkoff(t, p1, p2, axes));
  const auto gauss = normalize_jsi(jsa_dualpump_walkoff(t, p1, p2, axes, {true, {}}));
  CHECK(gauss.regime == JsaRegime::WalkoffGaussian);
  const auto a = jsi(exact), b = jsi(gauss);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  CHECK(std::sqrt(num / den) < 0.02);
}

TEST_CASE("walk-off with a misplaced pre-delay departs from the Gaussian limit") {
  const auto p1 = pump(2.6, 0.04), p2 = pump(2.2, 0.04);
  GroupDelayTerms t;
  t.T_s = 300.0;
  t.T_i = -300.0;
  t.tau_p = 20.0 / (0.04 / std::sqrt(2.0));
  const auto axes = uniform_axes(2.5, 2.3, 0.12, 0.12, 61, 61);
  const auto centred = normalize_jsi(jsa_dualpump_walkoff(t, p1, p2, axes));
  const auto late = normalize_jsi(jsa_dualpump_walkoff(t, p1, p2, axes, {false, 0.0}));
  CHECK(max_rel_dev_abs(centred, late) > 0.1);
}

TEST_CASE("normalize_jsi: unit norm, idempotent, scale invariant") {
  GroupDelayTerms t;
  t.T_s = 20.0;
  t.T_i = -35.0;
  const auto p = pump(2.4, 0.05);
  auto g = jsa_linearized(t, p, p, uniform_axes(2.6, 2.2, 0.3, 0.3, 51, 51));
  const auto n1 = normalize_jsi(g);
  CHECK(n1.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  const auto n2 = normalize_jsi(n1);
  for (std::size_t k = 0; k < n1.amp.size(); ++k) CHECK(std::abs(n2.amp[k] - n1.amp[k]) < 1e-12);
  for (auto& v : g.amp) v *= 7.0;
  const auto n3 = normalize_jsi(g);
  for (std::size_t k = 0; k < n1.amp.size(); ++k) CHECK(std::abs(n3.amp[k] - n1.amp[k]) < 1e-12);
  for (auto& v : g.amp) v = 0.0;
  CHECK_THROWS_AS(normalize_jsi(g), Error);
}

TEST_CASE("degenerate single-mode JSA is exchange symmetric in magnitude") {
  const auto f = two_zdw_fiber(0.05);
  const auto p = pump(2.4, 0.04);
  const auto g = jsa_full(f, single_mode_process(), p, p, uniform_axes(2.4, 2.4, 0.6, 0.6, 31, 31));
  const double m = max_abs(g);
  for (std::size_t is = 0; is < 31; ++is)
    for (std::size_t ii = 0; ii < 31; ++ii)
      CHECK(std::abs(std::abs(g.at(is, ii)) - std::abs(g.at(ii, is))) < 1e-9 * m);
}

TEST_CASE("equal pump chirp changes only the phase when the mismatch is frequency independent") {
  const auto f = taylor_fiber(2.4, {11.69, 4.9});
  const auto axes = uniform_axes(2.5, 2.3, 0.12, 0.12, 25, 25);
  const auto a = normalize_jsi(jsa_full(f, single_mode_process(), pump(2.4, 0.04), pump(2.4, 0.04), axes));
  const auto b = normalize_jsi(jsa_full(f, single_mode_process(), pump(2.4, 0.04, 300.0), pump(2.4, 0.04, 300.0), axes));
  double dphase = 0.0;
  for (std::size_t k = 0; k < a.amp.size(); ++k) {
    CHECK(std::abs(std::abs(a.amp[k]) - std::abs(b.amp[k])) < 1e-9);
    dphase = std::max(dphase, std::abs(std::arg(b.amp[k] * std::conj(a.amp[k]))));
  }
  CHECK(dphase > 0.1);
}

TEST_CASE("serial and parallel quadrature are bitwise identical") {
  const auto f = two_zdw_fiber(0.05);
  const auto p = pump(2.4, 0.04);
  const auto axes = uniform_axes(2.4, 2.4, 0.3, 0.3, 17, 17);
  const auto a = jsa_full(f, single_mode_process(), p, p, axes, {Exec::Serial});
  const auto b = jsa_full(f, single_mode_process(), p, p, axes, {Exec::Parallel});
  for (std::size_t k = 0; k < a.amp.size(); ++k) {
    CHECK(a.amp[k].real() == b.amp[k].real());
    CHECK(a.amp[k].imag() == b.amp[k].imag());
  }
}

TEST_CASE("counter-propagating JSA peaks at the pump frequencies") {
  const auto f = taylor_fiber(2.4, {11.69, 4.9, 0.02, 0.01}, {}, 0.001);
  auto proc = single_mode_process();
  proc.pump2.direction = Direction::Backward;
  proc.idler.direction = Direction::Backward;
  const auto p1 = pump(2.5, 0.005), p2 = pump(2.3, 0.005);
  JsaAxes axes;
  axes.omega_s0 = 2.5;
  axes.omega_i0 = 2.3;
  for (int k = 0; k < 31; ++k) {
    axes.nu_s.push_back(-0.011 + 0.001 * k);
    axes.nu_i.push_back(-0.019 + 0.001 * k);
  }
  const auto g = jsa_counterprop(f, proc, p1, p2, axes);
  std::size_t best = 0;
  for (std::size_t k = 0; k < g.amp.size(); ++k)
    if (std::abs(g.amp[k]) > std::abs(g.amp[best])) best = k;
  CHECK(std::abs(g.nu_s[best / g.ni()]) < 1.5e-3);
  CHECK(std::abs(g.nu_i[best % g.ni()]) < 1.5e-3);
  CHECK_THROWS_AS(jsa_full(f, proc, p1, p2, axes), Error);
  CHECK_THROWS_AS(jsa_counterprop(f, single_mode_process(), p1, p2, axes), Error);
}

TEST_CASE("axes validation") {
  JsaAxes a = uniform_axes(2.5, 2.3, 0.1, 0.1, 11, 11);
  a.nu_s[3] += 1e-3;
  CHECK_THROWS_AS(a.validate(), Error);
  CHECK_THROWS_AS(uniform_axes(2.5, 2.3, 0.1, 0.1, 1, 11), Error);
  GroupDelayTerms t;
  t.T_s = 50.0;
  t.T_i = -50.0;
  t.centers = {2.4, 2.4, 2.6};
  const auto d = default_axes(t, pump(2.4, 0.02), pump(2.4, 0.02), 64);
  CHECK(d.nu_s.size() == 64);
  CHECK(d.omega_i0 == doctest::Approx(2.2));
  CHECK(d.nu_s.back() > 0.0);
}
