#include "sfwm/charsim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "sfwm/errors.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

using Matrix = Eigen::MatrixXd;

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

void normalize(std::vector<double>& v) {
  for (double& x : v) x = std::max(x, 0.0);
  const double s = sum(v);
  if (s > 0.0)
    for (double& x : v) x /= s;
}

Matrix to_matrix(const JsiGrid& g) {
  Matrix m(static_cast<Eigen::Index>(g.ns()), static_cast<Eigen::Index>(g.ni()));
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b) m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = g.at(a, b);
  return m;
}

std::vector<double> from_matrix(const Matrix& m) {
  std::vector<double> v(static_cast<std::size_t>(m.size()));
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) v[static_cast<std::size_t>(a * m.cols() + b)] = m(a, b);
  return v;
}

JsiGrid unit_mass(const JsiGrid& g) {
  if (g.w.size() != g.ns() * g.ni() || g.ns() < 2 || g.ni() < 2)
    fail(ErrorKind::InvalidArgument, "JSI grid needs >= 2 samples per axis and matching data");
  JsiGrid out = g;
  normalize(out.w);
  if (!(sum(out.w) > 0.0)) fail(ErrorKind::ZeroGrid, "JSI has zero mass");
  return out;
}

// Fraction of each cell [x - d/2, x + d/2] seen through windows [c - w/2, c + w/2].
Matrix passband_matrix(const std::vector<double>& centers, double width,
                       const std::vector<double>& cells, double cell_width) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(centers.size()), static_cast<Eigen::Index>(cells.size()));
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = 0; b < cells.size(); ++b) {
      const double lo = std::max(centers[a] - width / 2, cells[b] - cell_width / 2);
      const double hi = std::min(centers[a] + width / 2, cells[b] + cell_width / 2);
      if (hi > lo) m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (hi - lo) / cell_width;
    }
  return m;
}

double poisson(std::uint64_t seed, double mean) {
  if (!(mean > 0.0)) return 0.0;
  std::mt19937_64 rng(seed);
  return static_cast<double>(std::poisson_distribution<long long>(mean)(rng));
}

double accidentals(const DetectorModel& det, double dwell_s) {
  return det.dark_rate_hz * det.dark_rate_hz * det.window_ps * 1e-12 * dwell_s;
}

// Positive-frequency cosine lattice nu'_j = (j0 + j) dnu, delays tau_k = k dtau.
struct CosineLattice {
  double dnu = 0.0;
  int j0 = 0, n = 0, N = 0;
  double dtau = 0.0;
  int K = 0;

  double freq(int j) const { return (j0 + j) * dnu; }
  // interferogram rows: 1 + cos(nu' tau)
  Matrix synth() const {
    Matrix a(K, n);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < n; ++j) a(k, j) = 1.0 + std::cos(freq(j) * k * dtau);
    return a;
  }
  // cosine transform back to bin masses
  Matrix analysis() const {
    Matrix b(n, K);
    const double c = 2.0 * dnu * dtau / units::kPi;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < K; ++k) {
        const double w = (k == 0 || k == K - 1) ? 0.5 : 1.0;
        b(j, k) = c * w * std::cos(freq(j) * k * dtau);
      }
    return b;
  }
};

CosineLattice make_lattice(double dnu, int n, const FtOptions& opt) {
  CosineLattice l;
  l.dnu = dnu;
  l.n = n;
  l.j0 = opt.offset_bins > 0 ? opt.offset_bins : opt.filter_bins + 2;
  l.N = l.j0 + n;
  l.dtau = opt.delay_step_fs > 0.0 ? opt.delay_step_fs : units::kPi / (l.N * dnu);
  l.K = opt.delay_samples > 0 ? opt.delay_samples : l.N + 1;
  if (l.K < 2) fail(ErrorKind::InvalidArgument, "need >= 2 delay samples");
  if (l.freq(n - 1) * l.dtau >= units::kPi)
    fail(ErrorKind::NyquistViolation, "delay step " + std::to_string(l.dtau) +
                                          " fs aliases the highest frequency " +
                                          std::to_string(l.freq(n - 1)) + " rad/fs");
  return l;
}

// Adds shot noise and accidentals to an interferogram normalized to unit source mass.
void noisy_interferogram(Matrix& I, const FtOptions& opt, const DetectorModel& det,
                         std::uint64_t setting_base) {
  const double scale = opt.pair_budget * det.efficiency * det.efficiency;
  const double bg = accidentals(det, opt.dwell_s);
  std::vector<double> out;
  const std::size_t rows = static_cast<std::size_t>(I.rows()), cols = static_cast<std::size_t>(I.cols());
  kernels::fill(opt.exec, out, rows, cols, [&](std::size_t a, std::size_t b) {
    const double mean = scale * I(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) + bg;
    return (poisson(stream_seed(det.seed, setting_base + a * cols + b), mean) - bg) / scale;
  });
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b)
      I(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = out[a * cols + b];
}

// 1D round trip of bin masses through the interferogram.
std::vector<double> ft_round_trip(const std::vector<double>& mass, double dnu, const FtOptions& opt,
                                  const DetectorModel& det, std::uint64_t setting_base) {
  const auto lat = make_lattice(dnu, static_cast<int>(mass.size()), opt);
  Eigen::VectorXd m(lat.n);
  for (int j = 0; j < lat.n; ++j) m(j) = mass[static_cast<std::size_t>(j)];
  Matrix I = lat.synth() * m;
  if (!opt.noiseless) noisy_interferogram(I, opt, det, setting_base);
  const Eigen::VectorXd est = lat.analysis() * I;
  std::vector<double> out(mass.size());
  for (int j = 0; j < lat.n; ++j)
    out[static_cast<std::size_t>(j)] = lat.j0 + j < opt.filter_bins ? 0.0 : std::max(est(j), 0.0);
  return out;
}

// standard deviation of a lattice distribution, in lattice steps
double lattice_std(const std::vector<double>& p) {
  double s = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t q = 0; q < p.size(); ++q) {
    s += p[q];
    m1 += q * p[q];
    m2 += double(q) * q * p[q];
  }
  m1 /= s;
  return std::sqrt(std::max(m2 / s - m1 * m1, 0.0));
}

// Cumulative of a uniform [a, b] distribution convolved with a Gaussian of width sigma.
double uniform_gauss_cdf(double x, double a, double b, double sigma) {
  auto G = [&](double z) {
    if (sigma <= 0.0) return std::max(z, 0.0);
    const double u = z / sigma;
    return z * 0.5 * std::erfc(-u / std::sqrt(2.0)) + sigma * std::exp(-0.5 * u * u) / std::sqrt(2.0 * units::kPi);
  };
  return (G(x - a) - G(x - b)) / (b - a);
}

}  // namespace

JsiGrid jsi_grid(const JsaGrid& g) {
  JsiGrid out;
  out.nu_s = g.nu_s;
  out.nu_i = g.nu_i;
  out.omega_s0 = g.omega_s0;
  out.omega_i0 = g.omega_i0;
  out.w.resize(g.amp.size());
  for (std::size_t k = 0; k < g.amp.size(); ++k) out.w[k] = std::norm(g.amp[k]);
  return out;
}

JsaGrid amplitude_from_jsi(const JsiGrid& g) {
  JsaGrid out;
  out.nu_s = g.nu_s;
  out.nu_i = g.nu_i;
  out.omega_s0 = g.omega_s0;
  out.omega_i0 = g.omega_i0;
  out.amp.resize(g.w.size());
  for (std::size_t k = 0; k < g.w.size(); ++k) out.amp[k] = std::sqrt(std::max(g.w[k], 0.0));
  return out;
}

void DetectorModel::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) fail(ErrorKind::InvalidArgument, "efficiency must be in (0, 1]");
  if (!(dark_rate_hz >= 0.0) || !(jitter_ps >= 0.0) || !(window_ps >= 0.0))
    fail(ErrorKind::InvalidArgument, "detector rates and times must be >= 0");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t setting) {
  return splitmix64(seed ^ splitmix64(setting));
}

ReconstructionMetrics reconstruction_error(const JsiGrid& truth, const JsiGrid& estimate) {
  const JsiGrid t = unit_mass(truth);
  std::vector<double> q(t.w.size(), 0.0);
  const bool same = estimate.nu_s == truth.nu_s && estimate.nu_i == truth.nu_i;
  if (same) {
    q = estimate.w;
  } else {
    // bilinear resampling of the estimate onto the truth axes
    auto locate = [](const std::vector<double>& ax, double x, std::size_t& k, double& f) {
      if (ax.size() < 2 || x < ax.front() || x > ax.back()) return false;
      k = std::min<std::size_t>(std::upper_bound(ax.begin(), ax.end(), x) - ax.begin(), ax.size() - 1);
      k = k == 0 ? 0 : k - 1;
      f = (x - ax[k]) / (ax[k + 1] - ax[k]);
      return true;
    };
    for (std::size_t a = 0; a < t.ns(); ++a) {
      std::size_t ka;
      double fa;
      if (!locate(estimate.nu_s, t.nu_s[a], ka, fa)) continue;
      for (std::size_t b = 0; b < t.ni(); ++b) {
        std::size_t kb;
        double fb;
        if (!locate(estimate.nu_i, t.nu_i[b], kb, fb)) continue;
        q[a * t.ni() + b] = (1 - fa) * (1 - fb) * estimate.at(ka, kb) + fa * (1 - fb) * estimate.at(ka + 1, kb) +
                            (1 - fa) * fb * estimate.at(ka, kb + 1) + fa * fb * estimate.at(ka + 1, kb + 1);
      }
    }
  }
  normalize(q);
  ReconstructionMetrics m;
  for (std::size_t k = 0; k < q.size(); ++k) {
    m.l1 += std::abs(t.w[k] - q[k]);
    m.overlap += std::sqrt(t.w[k] * q[k]);
  }
  m.overlap = std::min(m.overlap, 1.0);
  return m;
}

Reconstruction sim_monochromator(const JsiGrid& truth_in, int steps_s, int steps_i,
                                 double pair_budget, const DetectorModel& det,
                                 const MonochromatorOptions& opt) {
  if (steps_s < 8 || steps_i < 8) fail(ErrorKind::InvalidArgument, "monochromator needs >= 8 steps per axis");
  if (!(pair_budget > 0.0)) fail(ErrorKind::InvalidArgument, "pair budget must be > 0");
  det.validate();
  const JsiGrid truth = unit_mass(truth_in);
  Reconstruction rec;
  rec.noiseless = opt.noiseless;
  rec.estimate.omega_s0 = truth.omega_s0;
  rec.estimate.omega_i0 = truth.omega_i0;
  rec.estimate.nu_s = uniform_axis(truth.nu_s.front(), truth.nu_s.back(), static_cast<std::size_t>(steps_s));
  rec.estimate.nu_i = uniform_axis(truth.nu_i.front(), truth.nu_i.back(), static_cast<std::size_t>(steps_i));
  const double ws = opt.passband_s > 0.0 ? opt.passband_s : rec.estimate.dnu_s();
  const double wi = opt.passband_i > 0.0 ? opt.passband_i : rec.estimate.dnu_i();
  const Matrix expected = det.efficiency * det.efficiency * pair_budget *
                          passband_matrix(rec.estimate.nu_s, ws, truth.nu_s, truth.dnu_s()) * to_matrix(truth) *
                          passband_matrix(rec.estimate.nu_i, wi, truth.nu_i, truth.dnu_i()).transpose();
  const double bg = accidentals(det, opt.dwell_s);
  const std::size_t ni = static_cast<std::size_t>(steps_i);
  kernels::fill(opt.exec, rec.estimate.w, static_cast<std::size_t>(steps_s), ni, [&](std::size_t a, std::size_t b) {
    const double mean = expected(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    if (opt.noiseless) return mean;
    return std::max(poisson(stream_seed(det.seed, a * ni + b), mean + bg) - bg, 0.0);
  });
  rec.settings = static_cast<std::size_t>(steps_s) * ni;
  rec.dwell_s = opt.dwell_s;
  rec.acquisition_proxy_s = rec.settings * opt.dwell_s;
  rec.detected_counts = expected.sum();
  const double peak = expected.maxCoeff();
  rec.snr = peak / std::sqrt(peak + bg);
  normalize(rec.estimate.w);
  rec.metrics = reconstruction_error(truth, rec.estimate);
  return rec;
}

std::string to_string(FtMode m) {
  switch (m) {
    case FtMode::OneD: return "oneD";
    case FtMode::TwoD: return "twoD";
    case FtMode::Diagonal: return "diagonal";
  }
  return "?";
}

FtMode parse_ft_mode(const std::string& s) {
  if (s == "oneD") return FtMode::OneD;
  if (s == "twoD") return FtMode::TwoD;
  if (s == "diagonal") return FtMode::Diagonal;
  fail(ErrorKind::ConfigError, "unknown Fourier mode '" + s + "'");
}

Reconstruction sim_ft_spectroscopy(const JsaGrid& truth_jsa, const FtOptions& opt,
                                   const DetectorModel& det) {
  det.validate();
  if (opt.filter_bins < 0) fail(ErrorKind::InvalidArgument, "filter_bins must be >= 0");
  const JsiGrid truth = unit_mass(jsi_grid(truth_jsa));
  Reconstruction rec;
  rec.noiseless = opt.noiseless;
  rec.dwell_s = opt.dwell_s;
  rec.estimate = truth;
  const std::size_t ns = truth.ns(), ni = truth.ni();

  if (opt.mode == FtMode::TwoD) {
    const auto ls = make_lattice(truth.dnu_s(), static_cast<int>(ns), opt);
    const auto li = make_lattice(truth.dnu_i(), static_cast<int>(ni), opt);
    Matrix I = ls.synth() * to_matrix(truth) * li.synth().transpose();
    if (!opt.noiseless) noisy_interferogram(I, opt, det, 0);
    Matrix E = ls.analysis() * I * li.analysis().transpose();
    for (int a = 0; a < ls.n; ++a)
      for (int b = 0; b < li.n; ++b)
        if (ls.j0 + a < opt.filter_bins || li.j0 + b < opt.filter_bins) E(a, b) = 0.0;
    rec.estimate.w = from_matrix(E);
    rec.settings = static_cast<std::size_t>(ls.K) * static_cast<std::size_t>(li.K);
  } else if (opt.mode == FtMode::OneD) {
    std::vector<double> ms(ns, 0.0), mi(ni, 0.0);
    for (std::size_t a = 0; a < ns; ++a)
      for (std::size_t b = 0; b < ni; ++b) {
        ms[a] += truth.at(a, b);
        mi[b] += truth.at(a, b);
      }
    const auto es = ft_round_trip(ms, truth.dnu_s(), opt, det, 0);
    const auto ei = ft_round_trip(mi, truth.dnu_i(), opt, det, 1u << 20);
    for (std::size_t a = 0; a < ns; ++a)
      for (std::size_t b = 0; b < ni; ++b) rec.estimate.at(a, b) = es[a] * ei[b];
    rec.settings = 2 * (ns + static_cast<std::size_t>(opt.filter_bins) + 3);
  } else {
    const double d = truth.dnu_s();
    if (std::abs(truth.dnu_i() - d) > 1e-9 * d)
      fail(ErrorKind::InvalidArgument, "diagonal mode needs equal signal and idler steps");
    // sum and difference frequencies live on a lattice of step d
    std::vector<double> sum_mass(ns + ni - 1, 0.0), diff_mass(ns + ni - 1, 0.0);
    for (std::size_t a = 0; a < ns; ++a)
      for (std::size_t b = 0; b < ni; ++b) {
        sum_mass[a + b] += truth.at(a, b);
        diff_mass[a + ni - 1 - b] += truth.at(a, b);
      }
    const auto es = ft_round_trip(sum_mass, d, opt, det, 0);
    const auto ea = ft_round_trip(diff_mass, d, opt, det, 1u << 20);
    // rotated coordinates (nu_s +- nu_i)/sqrt2
    rec.sigma_d = lattice_std(es) * d / std::sqrt(2.0);
    rec.sigma_a = lattice_std(ea) * d / std::sqrt(2.0);
    rec.r = rec.sigma_d * rec.sigma_d / (rec.sigma_a * rec.sigma_a);
    rec.implied_purity = 2.0 * std::sqrt(rec.r) / (1.0 + rec.r);
    rec.settings = 2 * (es.size() + static_cast<std::size_t>(opt.filter_bins) + 3);
    // Gaussian estimate with the recovered widths about the recovered means
    double ms = 0.0, md = 0.0, ss = 0.0, sd = 0.0;
    for (std::size_t q = 0; q < es.size(); ++q) {
      ms += q * es[q];
      ss += es[q];
      md += q * ea[q];
      sd += ea[q];
    }
    const double u0 = truth.nu_s.front() + truth.nu_i.front() + d * ms / ss;
    const double v0 = truth.nu_s.front() - truth.nu_i.back() + d * md / sd;
    for (std::size_t a = 0; a < ns; ++a)
      for (std::size_t b = 0; b < ni; ++b) {
        const double u = (truth.nu_s[a] + truth.nu_i[b] - u0) / std::sqrt(2.0);
        const double v = (truth.nu_s[a] - truth.nu_i[b] - v0) / std::sqrt(2.0);
        rec.estimate.at(a, b) = std::exp(-0.5 * (u * u / (rec.sigma_d * rec.sigma_d) + v * v / (rec.sigma_a * rec.sigma_a)));
      }
  }
  rec.acquisition_proxy_s = rec.settings * opt.dwell_s;
  const double scale = opt.pair_budget * det.efficiency * det.efficiency;
  rec.detected_counts = rec.settings * scale;
  rec.snr = opt.noiseless ? std::numeric_limits<double>::infinity()
                          : std::sqrt(scale) / std::sqrt(1.0 + accidentals(det, opt.dwell_s) / scale);
  normalize(rec.estimate.w);
  rec.metrics = reconstruction_error(truth, rec.estimate);
  return rec;
}

Reconstruction sim_dispersive_fiber(const JsiGrid& truth_in, double d_ps_nm_km, double length_km,
                                    const DetectorModel& det, const DispersiveOptions& opt) {
  det.validate();
  if (d_ps_nm_km == 0.0 || !(length_km > 0.0))
    fail(ErrorKind::InvalidArgument, "dispersive fiber needs nonzero D and positive length");
  const JsiGrid truth = unit_mass(truth_in);
  // arrival time of a frequency edge relative to the band center
  auto time_of = [&](double omega0, double nu) {
    const double dl_nm = 1e3 * (units::lambda_from_omega(omega0 + nu) - units::lambda_from_omega(omega0));
    return dispersive_delay_ps(d_ps_nm_km, length_km, dl_nm);
  };
  struct AxisMap {
    std::vector<double> lo, hi;  // time extent of each frequency cell
  };
  auto map_axis = [&](const std::vector<double>& nu, double d, double omega0) {
    AxisMap m;
    for (double x : nu) {
      const double a = time_of(omega0, x - d / 2), b = time_of(omega0, x + d / 2);
      m.lo.push_back(std::min(a, b));
      m.hi.push_back(std::max(a, b));
    }
    return m;
  };
  const auto ms = map_axis(truth.nu_s, truth.dnu_s(), truth.omega_s0);
  const auto mi = map_axis(truth.nu_i, truth.dnu_i(), truth.omega_i0);
  double narrow = std::numeric_limits<double>::infinity();
  for (const auto* m : {&ms, &mi})
    for (std::size_t k = 0; k < m->lo.size(); ++k) narrow = std::min(narrow, m->hi[k] - m->lo[k]);
  const double bin = opt.bin_ps > 0.0 ? opt.bin_ps : narrow / 4.0;
  const double sig = det.jitter_ps;

  auto time_axis = [&](const AxisMap& m) {
    const double lo = *std::min_element(m.lo.begin(), m.lo.end()) - 5.0 * sig - bin;
    const double hi = *std::max_element(m.hi.begin(), m.hi.end()) + 5.0 * sig + bin;
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / bin)) + 1;
    std::vector<double> edges(n + 1);
    for (std::size_t k = 0; k <= n; ++k) edges[k] = lo + bin * static_cast<double>(k);
    return edges;
  };
  const auto es = time_axis(ms), ei = time_axis(mi);
  // forward map: mass of frequency cell c landing in time bin t
  auto forward = [&](const AxisMap& m, const std::vector<double>& e) {
    Matrix f(static_cast<Eigen::Index>(e.size() - 1), static_cast<Eigen::Index>(m.lo.size()));
    for (std::size_t t = 0; t + 1 < e.size(); ++t)
      for (std::size_t c = 0; c < m.lo.size(); ++c)
        f(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) =
            uniform_gauss_cdf(e[t + 1], m.lo[c], m.hi[c], sig) - uniform_gauss_cdf(e[t], m.lo[c], m.hi[c], sig);
    return f;
  };
  // inverse map: share of each time bin that falls in the cell's time extent
  auto inverse = [&](const AxisMap& m, const std::vector<double>& e) {
    Matrix g = Matrix::Zero(static_cast<Eigen::Index>(m.lo.size()), static_cast<Eigen::Index>(e.size() - 1));
    for (std::size_t c = 0; c < m.lo.size(); ++c)
      for (std::size_t t = 0; t + 1 < e.size(); ++t) {
        const double ov = std::min(e[t + 1], m.hi[c]) - std::max(e[t], m.lo[c]);
        if (ov > 0.0) g(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) = ov / (e[t + 1] - e[t]);
      }
    return g;
  };
  const double scale = opt.pair_budget * det.efficiency * det.efficiency;
  Matrix H = scale * forward(ms, es) * to_matrix(truth) * forward(mi, ei).transpose();
  Reconstruction rec;
  rec.noiseless = opt.noiseless;
  rec.dwell_s = opt.dwell_s;
  rec.detected_counts = H.sum();
  rec.snr = std::sqrt(H.maxCoeff());
  if (!opt.noiseless) {
    const double bg = accidentals(det, opt.dwell_s) * bin / std::max(det.window_ps, bin);
    for (Eigen::Index a = 0; a < H.rows(); ++a)
      for (Eigen::Index b = 0; b < H.cols(); ++b)
        H(a, b) = poisson(stream_seed(det.seed, static_cast<std::uint64_t>(a * H.cols() + b)), H(a, b) + bg);
  }
  for (std::size_t k = 0; k + 1 < es.size(); ++k) rec.t_s_ps.push_back(0.5 * (es[k] + es[k + 1]));
  for (std::size_t k = 0; k + 1 < ei.size(); ++k) rec.t_i_ps.push_back(0.5 * (ei[k] + ei[k + 1]));
  rec.histogram = from_matrix(H);
  rec.estimate = truth;
  rec.estimate.w = from_matrix(inverse(ms, es) * H * inverse(mi, ei).transpose());
  normalize(rec.estimate.w);
  rec.settings = 1;
  rec.acquisition_proxy_s = opt.dwell_s;

  // rms time spread of each marginal against the jitter
  auto spread = [&](const AxisMap& m, bool signal) {
    double s = 0.0, t1 = 0.0, t2 = 0.0;
    for (std::size_t c = 0; c < m.lo.size(); ++c) {
      double mass = 0.0;
      for (std::size_t o = 0; o < (signal ? truth.ni() : truth.ns()); ++o)
        mass += signal ? truth.at(c, o) : truth.at(o, c);
      const double t = 0.5 * (m.lo[c] + m.hi[c]);
      s += mass;
      t1 += mass * t;
      t2 += mass * t * t;
    }
    t1 /= s;
    return std::sqrt(std::max(t2 / s - t1 * t1, 0.0));
  };
  const double min_spread = std::min(spread(ms, true), spread(mi, false));
  rec.resolution_warning = sig > 0.0 && min_spread < opt.warn_ratio * sig;
  rec.metrics = reconstruction_error(truth, rec.estimate);
  return rec;
}

Reconstruction sim_set(const JsiGrid& truth_in, double seed_lo, double seed_hi, int seed_steps,
                       double seed_photons, const SetOptions& opt) {
  opt.det.validate();
  if (seed_steps < 2 || !(seed_hi > seed_lo)) fail(ErrorKind::InvalidArgument, "bad seed scan");
  if (!(seed_photons > 0.0)) fail(ErrorKind::InvalidArgument, "seed photon number must be > 0");
  const JsiGrid truth = unit_mass(truth_in);
  Reconstruction rec;
  rec.noiseless = opt.noiseless;
  rec.estimate.omega_s0 = truth.omega_s0;
  rec.estimate.omega_i0 = truth.omega_i0;
  rec.estimate.nu_s = truth.nu_s;
  rec.estimate.nu_i = uniform_axis(seed_lo, seed_hi, static_cast<std::size_t>(seed_steps));
  const std::size_t ns = truth.ns(), nk = rec.estimate.nu_i.size();
  const double gain = opt.pair_budget * seed_photons * opt.det.efficiency;
  const auto& ax = truth.nu_i;
  double peak = 0.0;
  std::vector<double> expected(ns * nk, 0.0);
  for (std::size_t k = 0; k < nk; ++k) {
    const double x = rec.estimate.nu_i[k];
    if (x < ax.front() || x > ax.back()) continue;
    // idler row at the seed frequency, linear in the truth grid
    std::size_t j = std::min<std::size_t>(std::upper_bound(ax.begin(), ax.end(), x) - ax.begin(), ax.size() - 1);
    j = j == 0 ? 0 : j - 1;
    const double f = (x - ax[j]) / (ax[j + 1] - ax[j]);
    for (std::size_t a = 0; a < ns; ++a) {
      const double v = f == 0.0 ? truth.at(a, j) : (1 - f) * truth.at(a, j) + f * truth.at(a, j + 1);
      expected[a * nk + k] = gain * v;
      peak = std::max(peak, gain * v);
    }
  }
  if (opt.noiseless) {
    rec.estimate.w = expected;
  } else {
    std::vector<double> noisy(ns * nk);
    for (std::size_t c = 0; c < noisy.size(); ++c) {
      const std::uint64_t s = stream_seed(opt.det.seed, c);
      double v = poisson(s, expected[c]);
      if (opt.relative_noise > 0.0) {
        std::mt19937_64 rng(splitmix64(s));
        v += std::normal_distribution<double>(0.0, opt.relative_noise * expected[c])(rng);
      }
      noisy[c] = std::max(v, 0.0);
    }
    rec.estimate.w = std::move(noisy);
  }
  rec.settings = nk;
  rec.dwell_s = opt.dwell_s;
  rec.acquisition_proxy_s = nk * opt.dwell_s;
  rec.detected_counts = sum(expected);
  rec.snr = peak / std::sqrt(peak + std::pow(opt.relative_noise * peak, 2));
  normalize(rec.estimate.w);
  rec.metrics = reconstruction_error(truth, rec.estimate);
  return rec;
}

}  // namespace sfwm
