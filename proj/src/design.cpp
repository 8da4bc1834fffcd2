#include "sfwm/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfwm/errors.hpp"
#include "sfwm/numerics.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double phase_of(const FiberModel& fiber, const ProcessSpec& process) {
  try {
    return nonlinear_phase(fiber, process);
  } catch (const Error&) {
    return 0.0;
  }
}

// Gaussian stand-in for the linearized JSA: exp(-N^2/(s1^2+s2^2)) exp(-Gamma X^2/4).
double gaussian_K(const GroupDelayTerms& t) {
  const double a = 1.0 / (t.sigma1 * t.sigma1 + t.sigma2 * t.sigma2);
  const double A = a + kGamma / 4.0 * t.T_s * t.T_s;
  const double B = a + kGamma / 4.0 * t.T_i * t.T_i;
  const double C = a + kGamma / 4.0 * t.T_s * t.T_i;
  const double det = A * B - C * C;
  if (!(det > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(A * B / det);
}

// Root of delta_k near `guess` within +-width, nearest to guess.
double local_root(const FiberModel& fiber, const ProcessSpec& process, const PumpAxis& axis,
                  double omega_p, double guess, double width, double phi) {
  const auto r = column_solutions(fiber, process, axis, omega_p, guess - width, guess + width, 33, phi);
  if (r.empty()) return kNaN;
  return *std::min_element(r.begin(), r.end(), [&](double x, double y) {
    return std::abs(x - guess) < std::abs(y - guess);
  });
}

struct TrackPoint {
  double omega_p = 0.0, detuning = 0.0;
  GroupDelayTerms terms;
  double product = 0.0;
};

std::vector<double> scan_axis(double lo, double hi, int n) {
  return uniform_axis(lo, hi, static_cast<std::size_t>(std::max(n, 2)));
}

}  // namespace

DesignCandidate make_candidate(const FiberModel& fiber, const ProcessSpec& process,
                               const GroupDelayTerms& t, double scale) {
  DesignCandidate c;
  c.process_label = process.label;
  c.omega_p1 = t.centers.omega_p1;
  c.omega_p2 = t.centers.omega_p2;
  c.omega_s = t.centers.omega_s;
  c.omega_i = t.centers.omega_i();
  c.sigma1 = t.sigma1;
  c.sigma2 = t.sigma2;
  c.length_m = t.length_m;
  c.scale = scale;
  c.T_s = t.T_s;
  c.T_i = t.T_i;
  c.delta_k = delta_k_with_phase(fiber, process, c.omega_p1, c.omega_p2, c.omega_s,
                                 phase_of(fiber, process));
  c.factorable = t.T_s * t.T_i <= kSegmentEdgeTolerance;
  const double tmax = std::max(std::abs(t.T_s), std::abs(t.T_i));
  c.symmetric = c.factorable && tmax > 0.0 && std::abs(t.T_s + t.T_i) / tmax <= kSymmetryTolerance;
  if (tmax > 0.0) {
    c.theta_deg = phasematch_angle(t.T_s, t.T_i).theta_sisi_deg;
    c.predicted_K = gaussian_K(t);
  } else {
    c.theta_deg = kNaN;
    c.predicted_K = 1.0;
  }
  const double sigma = std::sqrt(t.sigma1 * t.sigma2);
  c.eq8_residual = 2.0 * kGamma * sigma * sigma * std::abs(t.T_s * t.T_i) - 1.0;
  c.raman = raman_overlap(process, {c.omega_p1, c.omega_p2, c.omega_s, c.omega_i}).status ==
            RamanStatus::StokesBand;
  return c;
}

std::vector<FactorableSegment> factorable_search(const FiberModel& fiber,
                                                 const ProcessSpec& process,
                                                 const PumpRange& range, Exec exec) {
  if (!(range.omega_hi > range.omega_lo) || !(range.detuning_hi > range.detuning_lo))
    fail(ErrorKind::InvalidArgument, "empty pump or detuning range");
  const auto pumps = scan_axis(range.omega_lo, range.omega_hi, range.samples);
  const double phi = phase_of(fiber, process);
  const auto& ax = range.axis;
  auto terms_at = [&](double wp, double d) {
    return group_delay_terms(fiber, process, {ax.pump1(wp), ax.pump2(wp), ax.mean(wp) + d},
                             range.sigma1, range.sigma2);
  };

  // dispersionless: delta k vanishes across the window
  {
    double worst = 0.0;
    for (double wp : {range.omega_lo, 0.5 * (range.omega_lo + range.omega_hi), range.omega_hi})
      for (double d : scan_axis(range.detuning_lo, range.detuning_hi, 9))
        worst = std::max(worst, std::abs(delta_k_with_phase(fiber, process, ax.pump1(wp),
                                                            ax.pump2(wp), ax.mean(wp) + d, phi)));
    if (worst < kContourTolerance) {
      FactorableSegment seg;
      seg.degenerate = true;
      seg.warning = "delta k vanishes identically: T_s = T_i = 0 at every point";
      const double d0 = std::clamp(0.0, range.detuning_lo, range.detuning_hi);
      for (double wp : pumps) seg.points.push_back(make_candidate(fiber, process, terms_at(wp, d0)));
      return {seg};
    }
  }

  std::vector<std::vector<double>> roots;
  kernels::map(exec, roots, pumps.size(), [&](std::size_t j) {
    return column_solutions(fiber, process, ax, pumps[j], range.detuning_lo, range.detuning_hi,
                            range.detuning_samples, phi);
  });
  bool any = false;
  for (const auto& r : roots) any = any || !r.empty();
  if (!any) fail(ErrorKind::EmptyContour, "no phasematched points in the pump range");

  const double step = (range.detuning_hi - range.detuning_lo) / (range.detuning_samples - 1);
  std::vector<FactorableSegment> out;
  std::size_t max_tracks = 0;
  for (const auto& r : roots) max_tracks = std::max(max_tracks, r.size());

  for (std::size_t k = 0; k < max_tracks; ++k) {
    std::vector<TrackPoint> pts(pumps.size());
    std::vector<char> valid(pumps.size(), 0);
    for (std::size_t j = 0; j < pumps.size(); ++j) {
      if (roots[j].size() <= k) continue;
      pts[j].omega_p = pumps[j];
      pts[j].detuning = roots[j][k];
      pts[j].terms = terms_at(pumps[j], roots[j][k]);
      pts[j].product = pts[j].terms.T_s * pts[j].terms.T_i;
      valid[j] = 1;
    }
    // product along the track between two neighbouring samples
    auto product_between = [&](std::size_t a, std::size_t b, double wp) {
      const double f = (wp - pts[a].omega_p) / (pts[b].omega_p - pts[a].omega_p);
      const double guess = pts[a].detuning + f * (pts[b].detuning - pts[a].detuning);
      const double width = std::abs(pts[b].detuning - pts[a].detuning) + 4.0 * step;
      const double d = local_root(fiber, process, ax, wp, guess, width, phi);
      if (!std::isfinite(d)) return std::make_pair(kNaN, kNaN);
      const auto t = terms_at(wp, d);
      return std::make_pair(t.T_s * t.T_i, d);
    };
    auto boundary = [&](std::size_t in, std::size_t outside) -> std::optional<TrackPoint> {
      if (!(pts[outside].product > 0.0)) return std::nullopt;
      auto g = [&](double wp) { return product_between(in, outside, wp).first; };
      double wb;
      try {
        const bool up = pts[in].omega_p < pts[outside].omega_p;
        const auto& a = up ? pts[in] : pts[outside];
        const auto& b = up ? pts[outside] : pts[in];
        wb = numerics::find_root(g, a.omega_p, b.omega_p, a.product, b.product,
                                 1e-14 * std::abs(a.omega_p));
      } catch (const Error&) {
        return std::nullopt;
      }
      const double d = product_between(in, outside, wb).second;
      if (!std::isfinite(d)) return std::nullopt;
      TrackPoint p;
      p.omega_p = wb;
      p.detuning = d;
      p.terms = terms_at(wb, d);
      p.product = p.terms.T_s * p.terms.T_i;
      return p;
    };

    std::size_t j = 0;
    while (j < pumps.size()) {
      if (!valid[j] || pts[j].product > 0.0) {
        ++j;
        continue;
      }
      std::size_t e = j;
      while (e + 1 < pumps.size() && valid[e + 1] && pts[e + 1].product <= 0.0) ++e;
      FactorableSegment seg;
      seg.track = static_cast<int>(k);
      if (j > 0 && valid[j - 1])
        if (auto b = boundary(j, j - 1)) seg.points.push_back(make_candidate(fiber, process, b->terms));
      for (std::size_t m = j; m <= e; ++m) seg.points.push_back(make_candidate(fiber, process, pts[m].terms));
      if (e + 1 < pumps.size() && valid[e + 1])
        if (auto b = boundary(e, e + 1)) seg.points.push_back(make_candidate(fiber, process, b->terms));
      out.push_back(std::move(seg));
      j = e + 1;
    }
  }
  return out;
}

double symmetric_bandwidth_solve(const GroupDelayTerms& t, SolveFor solve_for) {
  const double prod = t.T_s * t.T_i;
  if (!(prod < 0.0))
    fail(ErrorKind::NonNegativeProduct, "T_s T_i = " + std::to_string(prod) + " fs^2 is not negative");
  const double asym = std::abs(t.T_s + t.T_i) / std::max(std::abs(t.T_s), std::abs(t.T_i));
  if (asym > kSymmetryTolerance)
    fail(ErrorKind::NotAntisymmetric, "|T_s + T_i|/max|T| = " + std::to_string(asym) +
                                          " exceeds the 5% symmetry tolerance");
  if (solve_for == SolveFor::Sigma) return 1.0 / std::sqrt(2.0 * kGamma * std::abs(prod));
  if (!(t.sigma1 > 0.0 && t.length_m > 0.0))
    fail(ErrorKind::InvalidArgument, "length solve needs sigma and the current length");
  // T scales with L, so |T_s T_i| grows as L^2
  const double sigma = std::sqrt(t.sigma1 * t.sigma2);
  return t.length_m / std::sqrt(2.0 * kGamma * sigma * sigma * std::abs(prod));
}

namespace {

double k2_at(const FiberModel& f, const ModeId& m, double omega) {
  return mode_dispersion(f, m, omega).k2;
}

// ZDW nearest to guess (um), polished on k2(omega). NaN if none.
double tracked_zdw(const FiberModel& f, const ModeId& mode, double lo, double hi, double guess) {
  std::vector<double> z;
  try {
    z = find_zdw(f, mode, lo, hi);
  } catch (const Error&) {
    return kNaN;
  }
  if (z.empty()) return kNaN;
  double l0 = std::isfinite(guess)
                  ? *std::min_element(z.begin(), z.end(), [&](double a, double b) {
                      return std::abs(a - guess) < std::abs(b - guess);
                    })
                  : z.front();
  const double w0 = units::omega_from_lambda(l0);
  auto g = [&](double w) { return k2_at(f, mode, w); };
  for (double span : {1e-6, 1e-5, 1e-4}) {
    const double a = w0 * (1.0 - span), b = w0 * (1.0 + span);
    const double ga = g(a), gb = g(b);
    if (ga * gb <= 0.0) return units::lambda_from_omega(numerics::find_root(g, a, b, ga, gb, 1e-15 * w0));
  }
  return l0;
}

}  // namespace

UltrabroadbandResult ultrabroadband_search(const FiberModel& fiber, const ModeId& mode,
                                           double scale_lo, double scale_hi,
                                           double lambda_lo_um, double lambda_hi_um,
                                           int scale_samples) {
  if (fiber.kind == FiberKind::Tabulated)
    fail(ErrorKind::NoRoot, "tabulated dispersion has no scale-parameterized family");
  if (!(scale_hi > scale_lo && scale_lo > 0.0) || scale_samples < 3)
    fail(ErrorKind::InvalidArgument, "bad scale range");
  const auto scales = scan_axis(scale_lo, scale_hi, scale_samples);
  std::vector<double> zdw(scales.size(), kNaN), h(scales.size(), kNaN);
  double guess = kNaN;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    const FiberModel f = scale_fiber(fiber, scales[j]);
    zdw[j] = tracked_zdw(f, mode, lambda_lo_um, lambda_hi_um, guess);
    if (std::isfinite(zdw[j])) {
      guess = zdw[j];
      h[j] = mode_dispersion(f, mode, units::omega_from_lambda(zdw[j])).k4;
    }
  }
  for (std::size_t j = 0; j + 1 < scales.size(); ++j) {
    if (!std::isfinite(h[j]) || !std::isfinite(h[j + 1]) || h[j] * h[j + 1] > 0.0) continue;
    auto k4_of = [&](double s) {
      const double f = (s - scales[j]) / (scales[j + 1] - scales[j]);
      const double l = tracked_zdw(scale_fiber(fiber, s), mode, lambda_lo_um, lambda_hi_um,
                                   zdw[j] + f * (zdw[j + 1] - zdw[j]));
      if (!std::isfinite(l)) fail(ErrorKind::NoRoot, "ZDW lost inside the scale bracket");
      return mode_dispersion(scale_fiber(fiber, s), mode, units::omega_from_lambda(l)).k4;
    };
    UltrabroadbandResult r;
    r.scale = numerics::find_root(k4_of, scales[j], scales[j + 1], h[j], h[j + 1], 1e-13 * scales[j]);
    const FiberModel f = scale_fiber(fiber, r.scale);
    const double fr = (r.scale - scales[j]) / (scales[j + 1] - scales[j]);
    r.lambda0_um = tracked_zdw(f, mode, lambda_lo_um, lambda_hi_um, zdw[j] + fr * (zdw[j + 1] - zdw[j]));
    const auto ds = mode_dispersion(f, mode, units::omega_from_lambda(r.lambda0_um));
    r.k2 = ds.k2;
    r.k3 = ds.k3;
    r.k4 = ds.k4;
    r.small_k3 = std::abs(ds.k3) < kSmallK3;
    return r;
  }
  fail(ErrorKind::NoRoot, "k4 at the tracked ZDW keeps one sign over the scale range");
}

double phasematch_bandwidth(const FiberModel& fiber, const ProcessSpec& process, double omega_p,
                            double max_detuning, int samples) {
  const double L = fiber.length_m * units::kMetersToMicrons;
  const double phi = phase_of(fiber, process);
  auto g = [&](double d) {
    return std::abs(L * delta_k_with_phase(fiber, process, omega_p, omega_p, omega_p + d, phi)) -
           2.0 * units::kPi;
  };
  double dp = 0.0, gp = g(0.0);
  if (gp >= 0.0) return 0.0;
  for (int s = 1; s < samples; ++s) {
    const double d = max_detuning * s / (samples - 1);
    const double gd = g(d);
    if (gd >= 0.0) return numerics::find_root(g, dp, d, gp, gd, 1e-14 * max_detuning);
    dp = d;
    gp = gd;
  }
  return max_detuning;
}

int column_count(const FiberModel& fiber, const ProcessSpec& process, double omega_p,
                 double power_w, const CriticalPowerOptions& opt) {
  ProcessSpec p = process;
  p.pump1_power_w = p.pump2_power_w = power_w;
  const double phi = nonlinear_phase(fiber, p);
  const auto r = column_solutions(fiber, p, PumpAxis{}, omega_p, std::max(opt.detuning_lo, 0.0),
                                  opt.detuning_hi, opt.detuning_samples, phi);
  return static_cast<int>(std::count_if(r.begin(), r.end(), [](double d) { return d > 0.0; }));
}

double critical_power(const FiberModel& fiber, const ProcessSpec& process, double pump_lambda_um,
                      const CriticalPowerOptions& opt) {
  if (!(opt.detuning_hi > 0.0) || !(opt.start_power_w > 0.0))
    fail(ErrorKind::InvalidArgument, "critical_power needs a positive detuning window and start power");
  const double wp = units::omega_from_lambda(pump_lambda_um);
  auto count = [&](double P) { return column_count(fiber, process, wp, P, opt); };
  double lo = 0.0, hi = 0.0;
  double P = opt.start_power_w;
  for (int it = 0; it < 80; ++it, P *= 2.0) {
    const int c = count(P);
    if (c >= 2) {
      lo = P;
    } else if (c == 0) {
      hi = P;
      break;
    }
  }
  if (!(lo > 0.0) || !(hi > 0.0))
    fail(ErrorKind::NoLoop, "no closed phasematching loop at this pump wavelength");
  while (hi / lo > 1.005) {
    const double mid = std::sqrt(lo * hi);
    (count(mid) >= 2 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<TuningRow> tuning_scan(const FiberModel& fiber, const ProcessSpec& process,
                                   const std::vector<double>& scales, double omega_p,
                                   double detuning_lo, double detuning_hi, int detuning_samples,
                                   Exec exec) {
  std::vector<TuningRow> rows;
  kernels::map(exec, rows, scales.size(), [&](std::size_t j) {
    TuningRow row;
    row.scale = scales[j];
    try {
      const FiberModel f = scale_fiber(fiber, scales[j]);
      const auto r = column_solutions(f, process, PumpAxis{}, omega_p, detuning_lo, detuning_hi,
                                      detuning_samples, phase_of(f, process));
      double best = 0.0;
      for (double d : r)
        if (d > 0.0) best = std::max(best, d);
      if (best > 0.0 && best < omega_p) {
        row.detuning = best;
        row.lambda_s_um = units::lambda_from_omega(omega_p + best);
        row.lambda_i_um = units::lambda_from_omega(omega_p - best);
        row.solved = true;
      }
    } catch (const Error&) {
      row.solved = false;
    }
    return row;
  });
  return rows;
}

}  // namespace sfwm
