#include "sfwm/fiber_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sfwm/errors.hpp"
#include "sfwm/io.hpp"
#include "sfwm/numerics.hpp"
#include "sfwm/sellmeier_constants.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

constexpr double kJ01 = 2.404825557695773;  // first zero of J0
constexpr double kJ11 = 3.831705970207512;  // first zero of J1
constexpr double kDerivStepMax = 0.08;      // rad/fs
constexpr double kDerivStepMin = 2e-4;

double polarization_sign(const ModeId& mode) {
  switch (polarization_of(mode)) {
    case Polarization::X: return 1.0;
    case Polarization::Y: return -1.0;
    default: return 0.0;
  }
}

// Scalar LP0m/LP1m characteristic equations, weakly guiding step index.
double lp_u(int order, double V) {
  using std::cyl_bessel_j;
  using std::cyl_bessel_k;
  if (order == 0) {
    const double umax = std::min(V, kJ01);
    auto f = [V](double U) {
      const double W = std::sqrt(std::max(V * V - U * U, 0.0));
      return U * cyl_bessel_j(1.0, U) / cyl_bessel_j(0.0, U) -
             W * cyl_bessel_k(1.0, W) / cyl_bessel_k(0.0, W);
    };
    const double lo = 1e-9, hi = umax * (1.0 - 1e-12);
    return numerics::find_root(f, lo, hi, f(lo), f(hi), 4e-16 * umax);
  }
  if (V <= kJ01) fail(ErrorKind::ModeCutoff, "LP11 mode is cut off (V <= 2.405)");
  const double umax = std::min(V, kJ11);
  auto g = [V](double U) {
    const double W = std::sqrt(std::max(V * V - U * U, 0.0));
    return U * cyl_bessel_j(0.0, U) / cyl_bessel_j(1.0, U) +
           W * cyl_bessel_k(0.0, W) / cyl_bessel_k(1.0, W);
  };
  const double lo = kJ01 * (1.0 + 1e-12), hi = umax * (1.0 - 1e-12);
  if (hi <= lo) fail(ErrorKind::ModeCutoff, "LP11 mode is at cutoff");
  return numerics::find_root(g, lo, hi, g(lo), g(hi), 4e-16 * umax);
}

double surrogate_index(const FiberModel& fiber, const ModeId& mode, double lambda_um) {
  int order = 0;
  switch (mode.label) {
    case ModeLabel::HE11x:
    case ModeLabel::HE11y: order = 0; break;
    case ModeLabel::TE01:
    case ModeLabel::TM01: order = 1; break;
    default: fail(ErrorKind::InvalidArgument, "surrogate has no dispersion for mode " + mode.name());
  }
  const double ncl = material_index(lambda_um);
  const double nco = ncl * (1.0 + fiber.index_contrast);
  const double na2 = nco * nco - ncl * ncl;
  const double a = fiber.core_radius_um * fiber.scale_factor;
  const double V = 2.0 * units::kPi * a / lambda_um * std::sqrt(na2);
  const double U = lp_u(order, V);
  const double b = 1.0 - U * U / (V * V);
  return std::sqrt(ncl * ncl + b * na2);
}

// Gaussian-weighted moving least squares, degree <= 5, in lambda.
double table_index(const DispersionTable& t, const ModeId& mode, double lambda_um) {
  const auto& x = t.lambda_um;
  if (x.empty()) fail(ErrorKind::TableGap, "empty dispersion table for " + mode.name());
  if (lambda_um < x.front() || lambda_um > x.back())
    fail(ErrorKind::TableGap, "wavelength " + std::to_string(lambda_um) + " um outside table for " +
                                  mode.name());
  if (x.size() == 1) return t.n_eff.front();
  double spacing = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) spacing = std::max(spacing, x[j] - x[j - 1]);
  const double hw = 1.5 * spacing;
  const auto lo = std::lower_bound(x.begin(), x.end(), lambda_um - 10.0 * hw) - x.begin();
  const auto hi = std::upper_bound(x.begin(), x.end(), lambda_um + 10.0 * hw) - x.begin();
  const int m = static_cast<int>(hi - lo);
  const int deg = std::min(5, m - 1);
  Eigen::MatrixXd A(m, deg + 1);
  Eigen::VectorXd b(m);
  for (int r = 0; r < m; ++r) {
    const double tt = (x[lo + r] - lambda_um) / hw;
    const double sw = std::exp(-0.25 * tt * tt);  // sqrt of exp(-t^2/2)
    double p = sw;
    for (int c = 0; c <= deg; ++c) {
      A(r, c) = p;
      p *= tt;
    }
    b(r) = sw * t.n_eff[lo + r];
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  return coef(0);
}

double taylor_k(const TaylorDispersion& td, double scale, double omega, int order) {
  // d^order/domega^order of sum beta_n x^n / n!
  const double x = omega - td.omega_ref;
  double sum = 0.0;
  for (std::size_t n = td.beta.size(); n-- > static_cast<std::size_t>(order);) {
    double beta = td.beta[n];
    if (n < td.dbeta_ds.size()) beta += (scale - 1.0) * td.dbeta_ds[n];
    sum = sum * x / static_cast<double>(n + 1 - order) + beta;
  }
  return sum;
}

const TaylorDispersion& taylor_for(const FiberModel& fiber, const ModeId& mode) {
  auto it = fiber.taylor_modes.find(mode);
  if (it == fiber.taylor_modes.end())
    fail(ErrorKind::InvalidArgument, "no Taylor dispersion for mode " + mode.name());
  return it->second;
}

const DispersionTable& table_for(const FiberModel& fiber, const ModeId& mode) {
  auto it = fiber.dispersion_tables.find(mode);
  if (it == fiber.dispersion_tables.end())
    fail(ErrorKind::TableGap, "no dispersion table for mode " + mode.name());
  return it->second;
}

double base_index(const FiberModel& fiber, const ModeId& mode, double omega) {
  const double lambda = units::lambda_from_omega(omega);
  if (fiber.kind == FiberKind::Tabulated) return table_index(table_for(fiber, mode), mode, lambda);
  return surrogate_index(fiber, mode, lambda);
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ModeCutoff: return "ModeCutoff";
    case ErrorKind::TableGap: return "TableGap";
    case ErrorKind::UnsupportedForTabulated: return "UnsupportedForTabulated";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonMonotonic: return "NonMonotonic";
    case ErrorKind::NonPhysical: return "NonPhysical";
    case ErrorKind::MissingGamma: return "MissingGamma";
    case ErrorKind::EmptyContour: return "EmptyContour";
    case ErrorKind::NotPhasematched: return "NotPhasematched";
    case ErrorKind::DegenerateTerms: return "DegenerateTerms";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::FaddeevaOverflow: return "FaddeevaOverflow";
    case ErrorKind::ZeroGrid: return "ZeroGrid";
    case ErrorKind::AxisMismatch: return "AxisMismatch";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::SinglePolarization: return "SinglePolarization";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::NonNegativeProduct: return "NonNegativeProduct";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::NoLoop: return "NoLoop";
    case ErrorKind::NyquistViolation: return "NyquistViolation";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ModeId ModeId::parse(std::string_view text) {
  if (text == "HE11x") return {ModeLabel::HE11x, {}};
  if (text == "HE11y") return {ModeLabel::HE11y, {}};
  if (text == "TE01") return {ModeLabel::TE01, {}};
  if (text == "TM01") return {ModeLabel::TM01, {}};
  if (text.empty()) fail(ErrorKind::ParseError, "empty mode label");
  return {ModeLabel::Custom, std::string(text)};
}

std::string ModeId::name() const {
  switch (label) {
    case ModeLabel::HE11x: return "HE11x";
    case ModeLabel::HE11y: return "HE11y";
    case ModeLabel::TE01: return "TE01";
    case ModeLabel::TM01: return "TM01";
    case ModeLabel::Custom: return tag;
  }
  return tag;
}

Polarization polarization_of(const ModeId& mode) {
  switch (mode.label) {
    case ModeLabel::HE11x:
    case ModeLabel::TE01: return Polarization::X;
    case ModeLabel::HE11y:
    case ModeLabel::TM01: return Polarization::Y;
    default: return Polarization::Unpolarized;
  }
}

void FiberModel::validate() const {
  if (!(core_radius_um > 0.0)) fail(ErrorKind::InvalidArgument, "core_radius must be > 0");
  if (kind == FiberKind::StepIndexSurrogate && !(index_contrast > 0.0 && index_contrast < 0.05))
    fail(ErrorKind::InvalidArgument, "index_contrast must lie in (0, 0.05) for the surrogate");
  if (!(scale_factor > 0.0)) fail(ErrorKind::InvalidArgument, "scale_factor must be > 0");
  if (!(length_m > 0.0)) fail(ErrorKind::InvalidArgument, "length must be > 0");
  for (const auto& [label, g] : gamma_table)
    if (!(g >= 0.0)) fail(ErrorKind::InvalidArgument, "gamma for '" + label + "' must be >= 0");
  for (const auto& [mode, t] : dispersion_tables) {
    if (t.lambda_um.size() != t.n_eff.size())
      fail(ErrorKind::InvalidArgument, "table size mismatch for " + mode.name());
    for (std::size_t j = 1; j < t.lambda_um.size(); ++j)
      if (!(t.lambda_um[j] > t.lambda_um[j - 1]))
        fail(ErrorKind::NonMonotonic, "wavelengths not strictly increasing for " + mode.name());
  }
}

double material_index(double lambda_um) {
  if (!(lambda_um >= sellmeier::kLambdaMinUm && lambda_um <= sellmeier::kLambdaMaxUm))
    fail(ErrorKind::OutOfRange,
         "wavelength " + std::to_string(lambda_um) + " um outside Sellmeier validity [0.21, 3.7]");
  const double l2 = lambda_um * lambda_um;
  double n2 = 1.0;
  for (std::size_t j = 0; j < 3; ++j) n2 += sellmeier::kB[j] * l2 / (l2 - sellmeier::kC[j]);
  return std::sqrt(n2);
}

double propagation_constant(const FiberModel& fiber, const ModeId& mode, double omega) {
  if (!(omega > 0.0)) fail(ErrorKind::NonPhysical, "frequency must be positive");
  const double offset = 0.5 * polarization_sign(mode) * fiber.birefringence * omega / units::kC;
  if (fiber.kind == FiberKind::TaylorSeries)
    return taylor_k(taylor_for(fiber, mode), fiber.scale_factor, omega, 0) + offset;
  return base_index(fiber, mode, omega) * omega / units::kC + offset;
}

double effective_index(const FiberModel& fiber, const ModeId& mode, double omega) {
  return propagation_constant(fiber, mode, omega) * units::kC / omega;
}

DispersionSample mode_dispersion(const FiberModel& fiber, const ModeId& mode, double omega) {
  DispersionSample s;
  s.omega = omega;
  if (fiber.kind == FiberKind::TaylorSeries) {
    const auto& td = taylor_for(fiber, mode);
    const double pol = 0.5 * polarization_sign(mode) * fiber.birefringence / units::kC;
    s.k = taylor_k(td, fiber.scale_factor, omega, 0) + pol * omega;
    s.k1 = taylor_k(td, fiber.scale_factor, omega, 1) + pol;
    s.k2 = taylor_k(td, fiber.scale_factor, omega, 2);
    s.k3 = taylor_k(td, fiber.scale_factor, omega, 3);
    s.k4 = taylor_k(td, fiber.scale_factor, omega, 4);
    return s;
  }
  auto k = [&](double w) { return propagation_constant(fiber, mode, w); };
  const auto est = numerics::derivatives(k, omega, kDerivStepMax, kDerivStepMin);
  s.k = est.d[0];
  s.k1 = est.d[1];
  s.k2 = est.d[2];
  s.k3 = est.d[3];
  s.k4 = est.d[4];
  s.converged = est.converged;
  return s;
}

double dispersion_parameter(const FiberModel& fiber, const ModeId& mode, double lambda_um) {
  const auto s = mode_dispersion(fiber, mode, units::omega_from_lambda(lambda_um));
  return units::dispersion_parameter_from_k2(s.k2, lambda_um);
}

std::vector<double> find_zdw(const FiberModel& fiber, const ModeId& mode, double lambda_min_um,
                             double lambda_max_um, int scan_samples) {
  // |D| below this is treated as signless noise
  constexpr double kNoise = 1e-7;
  auto D = [&](double l) { return dispersion_parameter(fiber, mode, l); };
  std::vector<double> roots;
  double l_prev = 0.0, d_prev = 0.0;
  bool have_prev = false;
  for (int j = 0; j < scan_samples; ++j) {
    const double l = lambda_min_um + (lambda_max_um - lambda_min_um) * j / (scan_samples - 1);
    double d;
    try {
      d = D(l);
    } catch (const Error&) {
      have_prev = false;
      continue;
    }
    if (std::abs(d) < kNoise) continue;
    if (have_prev && ((d > 0) != (d_prev > 0)))
      roots.push_back(numerics::find_root(D, l_prev, l, d_prev, d, 1e-9));
    l_prev = l;
    d_prev = d;
    have_prev = true;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

FiberModel scale_fiber(const FiberModel& fiber, double factor) {
  if (!(factor > 0.0)) fail(ErrorKind::InvalidArgument, "scale factor must be > 0");
  if (fiber.kind == FiberKind::Tabulated)
    fail(ErrorKind::UnsupportedForTabulated, "tabulated dispersion is geometry-specific");
  FiberModel out = fiber;
  out.scale_factor *= factor;
  return out;
}

FiberModel load_dispersion_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  FiberModel fiber;
  fiber.kind = FiberKind::Tabulated;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "mode,lambda_um,n_eff")
        fail(ErrorKind::ParseError, path + ":" + std::to_string(line_no) +
                                        ": expected header 'mode,lambda_um,n_eff'");
      header = true;
      continue;
    }
    const auto fields = io::split_csv_line(line);
    if (fields.size() != 3)
      fail(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": expected 3 fields");
    double lambda = 0.0, n = 0.0;
    if (!io::parse_double(fields[1], lambda) || !io::parse_double(fields[2], n))
      fail(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": bad number");
    const ModeId mode = ModeId::parse(fields[0]);
    auto& t = fiber.dispersion_tables[mode];
    if (!t.lambda_um.empty() && !(lambda > t.lambda_um.back()))
      fail(ErrorKind::NonMonotonic, path + ":" + std::to_string(line_no) + ": wavelength for " +
                                        mode.name() + " not strictly increasing");
    t.lambda_um.push_back(lambda);
    t.n_eff.push_back(n);
  }
  if (!header) fail(ErrorKind::ParseError, path + ":1: missing header");
  return fiber;
}

void export_dispersion_table(const FiberModel& fiber, const std::string& path) {
  std::ostringstream os;
  os << "mode,lambda_um,n_eff\n";
  for (const auto& [mode, t] : fiber.dispersion_tables)
    for (std::size_t j = 0; j < t.lambda_um.size(); ++j)
      os << mode.name() << ',' << io::fmt(t.lambda_um[j]) << ',' << io::fmt(t.n_eff[j]) << '\n';
  io::write_atomic(path, os.str());
}

}  // namespace sfwm
