#include "sfwm/quantum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sfwm/errors.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

bool same_axes(const JsaGrid& a, const JsaGrid& b) {
  auto eq = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (std::abs(x[k] - y[k]) > 1e-12 * (1.0 + std::abs(x[k]))) return false;
    return true;
  };
  return eq(a.nu_s, b.nu_s) && eq(a.nu_i, b.nu_i) &&
         std::abs(a.omega_s0 - b.omega_s0) <= 1e-12 * a.omega_s0 &&
         std::abs(a.omega_i0 - b.omega_i0) <= 1e-12 * a.omega_i0;
}

std::vector<ModeId> unique_labels(const std::vector<ModeId>& v) {
  std::vector<ModeId> out = v;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ln_at(const MultiProcessState& st, const std::vector<ModeId>& sl,
             const std::vector<ModeId>& il, int bins) {
  const auto& g0 = st.entries.front().grid;
  const std::size_t ns = g0.ns(), ni = g0.ni();
  const std::size_t B = static_cast<std::size_t>(bins);
  const std::size_t A = sl.size(), Pi = il.size();
  // idler index ii -> (bin b, offset r)
  std::vector<std::size_t> bin(ni), off(ni);
  std::size_t rmax = 0;
  for (std::size_t ii = 0; ii < ni; ++ii) {
    bin[ii] = ii * B / ni;
    const std::size_t start = (bin[ii] * ni + B - 1) / B;
    off[ii] = ii - start;
    rmax = std::max(rmax, off[ii] + 1);
  }
  const double area = std::sqrt(g0.dnu_s() * g0.dnu_i());
  // Phi rows (p_s, b), columns (nu_s, p_i, r); rho = Phi Phi^dagger
  CMatrix phi = CMatrix::Zero(static_cast<Eigen::Index>(A * B), static_cast<Eigen::Index>(ns * Pi * rmax));
  for (const auto& e : st.entries) {
    const std::size_t a = std::lower_bound(sl.begin(), sl.end(), e.signal_label) - sl.begin();
    const std::size_t p = std::lower_bound(il.begin(), il.end(), e.idler_label) - il.begin();
    for (std::size_t is = 0; is < ns; ++is)
      for (std::size_t ii = 0; ii < ni; ++ii)
        phi(static_cast<Eigen::Index>(a * B + bin[ii]),
            static_cast<Eigen::Index>((is * Pi + p) * rmax + off[ii])) += e.weight * e.grid.at(is, ii) * area;
  }
  const CMatrix rho = phi * phi.adjoint();
  CMatrix pt(rho.rows(), rho.cols());
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t a2 = 0; a2 < A; ++a2)
        for (std::size_t b2 = 0; b2 < B; ++b2)
          pt(static_cast<Eigen::Index>(a * B + b), static_cast<Eigen::Index>(a2 * B + b2)) =
              rho(static_cast<Eigen::Index>(a2 * B + b), static_cast<Eigen::Index>(a * B + b2));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(pt, Eigen::EigenvaluesOnly);
  const double trace = rho.trace().real();
  const double tn = es.eigenvalues().cwiseAbs().sum() / trace;
  return std::max(0.0, std::log2(tn));
}

}  // namespace

SchmidtReport metrics_from_schmidt_number(double K) {
  SchmidtReport r;
  r.K = K;
  r.purity = 1.0 / K;
  r.g2 = 1.0 + r.purity;
  r.hom_visibility = r.purity;
  return r;
}

SchmidtReport schmidt_decompose(const JsaGrid& grid) {
  if (grid.amp.empty()) fail(ErrorKind::ZeroGrid, "empty JSA grid");
  const double w = std::sqrt(grid.dnu_s() * grid.dnu_i());
  CMatrix m(static_cast<Eigen::Index>(grid.ns()), static_cast<Eigen::Index>(grid.ni()));
  for (std::size_t is = 0; is < grid.ns(); ++is)
    for (std::size_t ii = 0; ii < grid.ni(); ++ii)
      m(static_cast<Eigen::Index>(is), static_cast<Eigen::Index>(ii)) = grid.at(is, ii) * w;
  if (!(m.squaredNorm() > 0.0) || !std::isfinite(m.squaredNorm()))
    fail(ErrorKind::ZeroGrid, "JSA grid has zero norm");
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  std::vector<double> lam;
  double total = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) total += s[k] * s[k];
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double l = s[k] * s[k] / total;
    if (l >= kSchmidtTruncation) lam.push_back(l);
  }
  double kept = 0.0;
  for (double l : lam) kept += l;
  double sum_sq = 0.0;
  for (double& l : lam) {
    l /= kept;
    sum_sq += l * l;
  }
  SchmidtReport r = metrics_from_schmidt_number(1.0 / sum_sq);
  r.lambda = std::move(lam);
  return r;
}

BrightnessReport brightness_estimate(const FiberModel& fiber, const ProcessSpec& process,
                                     const PumpSpec& pump1, const PumpSpec& pump2,
                                     double l_max_scale) {
  pump1.validate();
  pump2.validate();
  if (!(fiber.length_m > 0.0)) fail(ErrorKind::InvalidArgument, "fiber length must be > 0");
  double g1 = 0.0, g2 = 0.0;
  if (process.gamma1_per_w_km && process.gamma2_per_w_km) {
    g1 = *process.gamma1_per_w_km;
    g2 = *process.gamma2_per_w_km;
  } else if (auto it = fiber.gamma_table.find(process.label); it != fiber.gamma_table.end()) {
    g1 = g2 = it->second;
  } else {
    fail(ErrorKind::MissingGamma, "no gamma for process '" + process.label + "'");
  }
  BrightnessReport r;
  r.l_eff_m = fiber.length_m;
  r.l_max_m = std::numeric_limits<double>::infinity();
  const bool degenerate = pump1.omega0 == pump2.omega0 && process.pump1.mode == process.pump2.mode;
  if (!degenerate) {
    const double dk1 = mode_dispersion(fiber, process.pump1.mode, pump1.omega0).k1 -
                       mode_dispersion(fiber, process.pump2.mode, pump2.omega0).k1;
    const double duration = 2.0 / std::max(pump1.sigma, pump2.sigma);
    if (dk1 != 0.0) {
      r.l_max_m = l_max_scale * duration / std::abs(dk1) / units::kMetersToMicrons;
      if (fiber.length_m > r.l_max_m) {
        r.l_eff_m = r.l_max_m;
        r.clamped = true;
      }
    }
  }
  const double sigma = std::sqrt(pump1.sigma * pump2.sigma);
  r.flux = pump1.power_w * pump2.power_w * sigma * r.l_eff_m * g1 * g2;
  return r;
}

std::vector<ModeId> MultiProcessState::signal_labels() const {
  std::vector<ModeId> v;
  for (const auto& e : entries) v.push_back(e.signal_label);
  return unique_labels(v);
}

std::vector<ModeId> MultiProcessState::idler_labels() const {
  std::vector<ModeId> v;
  for (const auto& e : entries) v.push_back(e.idler_label);
  return unique_labels(v);
}

double MultiProcessState::norm2() const {
  // entries sharing both labels interfere
  std::map<std::pair<ModeId, ModeId>, std::vector<cplx>> acc;
  for (const auto& e : entries) {
    auto& v = acc[{e.signal_label, e.idler_label}];
    if (v.empty()) v.assign(e.grid.amp.size(), cplx{});
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += e.weight * e.grid.amp[k];
  }
  double s = 0.0;
  for (const auto& [key, v] : acc)
    for (const auto& a : v) s += std::norm(a);
  const auto& g = entries.front().grid;
  return s * g.dnu_s() * g.dnu_i();
}

MultiProcessState build_multiprocess_state(const std::vector<ProcessAmplitude>& in) {
  if (in.empty()) fail(ErrorKind::InvalidArgument, "multi-process state needs at least one entry");
  MultiProcessState st;
  for (const auto& e : in) {
    if (!same_axes(e.grid, in.front().grid))
      fail(ErrorKind::AxisMismatch, "process '" + e.process.label + "' grid axes differ");
    st.entries.push_back({e.process, e.weight, e.grid, e.process.signal.mode, e.process.idler.mode});
  }
  const double n2 = st.norm2();
  if (!(n2 > 0.0)) fail(ErrorKind::ZeroGrid, "multi-process state has zero norm");
  const double s = 1.0 / std::sqrt(n2);
  for (auto& e : st.entries) e.weight *= s;
  return st;
}

PolarizationState polarization_state(const MultiProcessState& st) {
  if (st.entries.empty()) fail(ErrorKind::InvalidArgument, "empty state");
  PolarizationState out;
  out.signal_labels = st.signal_labels();
  out.idler_labels = st.idler_labels();
  const std::size_t d = out.dim(), nb = out.idler_labels.size();
  const auto& g0 = st.entries.front().grid;
  const double area = g0.dnu_s() * g0.dnu_i();
  // amplitude per label pair, summed over interfering entries
  std::vector<std::vector<cplx>> amp(d, std::vector<cplx>(g0.amp.size()));
  for (const auto& e : st.entries) {
    const std::size_t a = std::lower_bound(out.signal_labels.begin(), out.signal_labels.end(), e.signal_label) - out.signal_labels.begin();
    const std::size_t b = std::lower_bound(out.idler_labels.begin(), out.idler_labels.end(), e.idler_label) - out.idler_labels.begin();
    for (std::size_t k = 0; k < g0.amp.size(); ++k) amp[a * nb + b][k] += e.weight * e.grid.amp[k];
  }
  out.rho.assign(d * d, cplx{});
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      cplx s{};
      for (std::size_t k = 0; k < g0.amp.size(); ++k) s += amp[r][k] * std::conj(amp[c][k]);
      out.rho[r * d + c] = s * area;
    }
  return out;
}

NegativityReport log_negativity(const MultiProcessState& state, const NegativityOptions& opt) {
  if (state.entries.empty()) fail(ErrorKind::InvalidArgument, "empty state");
  if (opt.bins < 8) fail(ErrorKind::InvalidArgument, "log_negativity needs at least 8 bins");
  const auto sl = state.signal_labels(), il = state.idler_labels();
  const int ni = static_cast<int>(state.entries.front().grid.ni());
  NegativityReport r;
  r.bins = std::min(opt.bins, ni);
  if (sl.size() < 2) {
    if (opt.strict)
      fail(ErrorKind::SinglePolarization, "state has a single signal polarization label");
    r.converged = true;
    return r;
  }
  r.ln = ln_at(state, sl, il, r.bins);
  const int doubled = std::min(2 * r.bins, ni);
  r.ln_doubled = doubled == r.bins ? r.ln : ln_at(state, sl, il, doubled);
  r.converged = std::abs(r.ln_doubled - r.ln) < 1e-3;
  return r;
}

}  // namespace sfwm
