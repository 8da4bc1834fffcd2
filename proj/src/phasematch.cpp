#include "sfwm/phasematch.hpp"

#include <cmath>

#include "sfwm/errors.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

double sign(Direction d) { return d == Direction::Forward ? 1.0 : -1.0; }

double gamma_phase(double g1, double g2, const ProcessSpec& p) {
  return (g1 * p.pump1_power_w + g2 * p.pump2_power_w) * units::kPerWattKmToPerWattMicron;
}

}  // namespace

bool ProcessSpec::co_propagating() const {
  return pump1.direction == Direction::Forward && pump2.direction == Direction::Forward &&
         signal.direction == Direction::Forward && idler.direction == Direction::Forward;
}

void ProcessSpec::validate() const {
  if (!(pump1_power_w >= 0.0 && pump2_power_w >= 0.0))
    fail(ErrorKind::InvalidArgument, "pump powers must be >= 0");
  if ((gamma1_per_w_km && *gamma1_per_w_km < 0.0) || (gamma2_per_w_km && *gamma2_per_w_km < 0.0))
    fail(ErrorKind::InvalidArgument, "gamma must be >= 0");
}

ProcessSpec standard_process(int row) {
  static const char* pol[6][4] = {{"x", "x", "x", "x"}, {"y", "y", "y", "y"},
                                  {"x", "y", "x", "y"}, {"x", "y", "y", "x"},
                                  {"x", "x", "y", "y"}, {"y", "y", "x", "x"}};
  if (row < 1 || row > 6) fail(ErrorKind::InvalidArgument, "standard process row must be 1..6");
  auto m = [](const char* p) { return ModeId::parse(std::string("HE11") + p); };
  ProcessSpec s;
  s.table_row = row;
  s.label = "row" + std::to_string(row);
  const auto& r = pol[row - 1];
  s.pump1.mode = m(r[0]);
  s.pump2.mode = m(r[1]);
  s.signal.mode = m(r[2]);
  s.idler.mode = m(r[3]);
  return s;
}

double nonlinear_phase(const ProcessSpec& process) {
  if (process.pump1_power_w == 0.0 && process.pump2_power_w == 0.0) return 0.0;
  if (!process.gamma1_per_w_km || !process.gamma2_per_w_km)
    fail(ErrorKind::MissingGamma, "no gamma for process '" + process.label + "'");
  return gamma_phase(*process.gamma1_per_w_km, *process.gamma2_per_w_km, process);
}

double nonlinear_phase(const FiberModel& fiber, const ProcessSpec& process) {
  if (process.pump1_power_w == 0.0 && process.pump2_power_w == 0.0) return 0.0;
  std::optional<double> g1 = process.gamma1_per_w_km, g2 = process.gamma2_per_w_km;
  if (!g1 || !g2) {
    auto it = fiber.gamma_table.find(process.label);
    if (it == fiber.gamma_table.end())
      fail(ErrorKind::MissingGamma, "no gamma for process '" + process.label + "'");
    if (!g1) g1 = it->second;
    if (!g2) g2 = it->second;
  }
  return gamma_phase(*g1, *g2, process);
}

double delta_k_with_phase(const FiberModel& fiber, const ProcessSpec& p, double omega_p1,
                          double omega_p2, double omega_s, double phi_nl) {
  const double omega_i = omega_p1 + omega_p2 - omega_s;
  if (!(omega_i > 0.0) || !(omega_s > 0.0))
    fail(ErrorKind::NonPhysical, "signal and idler frequencies must be positive");
  return sign(p.pump1.direction) * propagation_constant(fiber, p.pump1.mode, omega_p1) +
         sign(p.pump2.direction) * propagation_constant(fiber, p.pump2.mode, omega_p2) -
         sign(p.signal.direction) * propagation_constant(fiber, p.signal.mode, omega_s) -
         sign(p.idler.direction) * propagation_constant(fiber, p.idler.mode, omega_i) - phi_nl;
}

double delta_k(const FiberModel& fiber, const ProcessSpec& process, double omega_p1,
               double omega_p2, double omega_s) {
  return delta_k_with_phase(fiber, process, omega_p1, omega_p2, omega_s,
                            nonlinear_phase(fiber, process));
}

double kappa_sum(const FiberModel& fiber, const ProcessSpec& p, double omega_p1, double omega_p2,
                 double omega_s) {
  const double omega_i = omega_p1 + omega_p2 - omega_s;
  if (!(omega_i > 0.0) || !(omega_s > 0.0))
    fail(ErrorKind::NonPhysical, "signal and idler frequencies must be positive");
  return propagation_constant(fiber, p.pump1.mode, omega_p1) +
         propagation_constant(fiber, p.pump2.mode, omega_p2) +
         propagation_constant(fiber, p.signal.mode, omega_s) +
         propagation_constant(fiber, p.idler.mode, omega_i);
}

GroupDelayTerms group_delay_terms(const FiberModel& fiber, const ProcessSpec& p,
                                  const CenterFrequencies& c, double sigma1, double sigma2,
                                  DelayVariant variant, double tolerance) {
  if (!(sigma1 > 0.0 && sigma2 > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be > 0");
  const double dk = delta_k(fiber, p, c.omega_p1, c.omega_p2, c.omega_s);
  if (std::abs(dk) > tolerance)
    fail(ErrorKind::NotPhasematched,
         "|delta_k| = " + std::to_string(std::abs(dk)) + " 1/um at the center frequencies");
  const double L = fiber.length_m * units::kMetersToMicrons;
  const double k1p1 = sign(p.pump1.direction) * mode_dispersion(fiber, p.pump1.mode, c.omega_p1).k1;
  const double k1p2 = sign(p.pump2.direction) * mode_dispersion(fiber, p.pump2.mode, c.omega_p2).k1;
  const double k1s = sign(p.signal.direction) * mode_dispersion(fiber, p.signal.mode, c.omega_s).k1;
  const double k1i = sign(p.idler.direction) * mode_dispersion(fiber, p.idler.mode, c.omega_i()).k1;

  GroupDelayTerms t;
  t.variant = variant;
  t.length_m = fiber.length_m;
  t.sigma1 = sigma1;
  t.sigma2 = sigma2;
  t.centers = c;
  t.tau_p = L * (k1p1 - k1p2);
  const double s1 = sigma1 * sigma1, s2 = sigma2 * sigma2;
  if (variant == DelayVariant::Eq5) {
    t.tau_s = L * (k1p2 - k1s);
    t.tau_i = L * (k1p2 - k1i);
    t.T_s = t.tau_s + t.tau_p * s1 / (s1 + s2);
    t.T_i = t.tau_i + t.tau_p * s1 / (s1 + s2);
  } else {
    // delays referenced to the mean pump group delay
    const double kbar = 0.5 * (k1p1 + k1p2);
    t.tau_s = L * (kbar - k1s);
    t.tau_i = L * (kbar - k1i);
    t.T_s = t.tau_s + (s1 - s2) / (s1 + s2) * t.tau_p / 2.0;
    t.T_i = t.tau_i + (s1 - s2) / (s1 + s2) * t.tau_p / 2.0;
  }
  return t;
}

PhasematchAngles phasematch_angle(double T_s, double T_i) {
  if (T_s == 0.0 && T_i == 0.0) fail(ErrorKind::DegenerateTerms, "T_s = T_i = 0");
  double theta;
  if (T_i == 0.0) {
    theta = 90.0;
  } else {
    theta = -std::atan(T_s / T_i) * 180.0 / units::kPi;
    if (theta <= -90.0) theta = 90.0;
  }
  return {theta, 45.0 - theta};
}

PhasematchAngles phasematch_angle(const GroupDelayTerms& terms) {
  return phasematch_angle(terms.T_s, terms.T_i);
}

RamanReport raman_overlap(const ProcessSpec&, const FrequencyPoint& pt) {
  RamanReport r;
  for (double pump : {pt.omega_p1, pt.omega_p2}) {
    for (double photon : {pt.omega_s, pt.omega_i}) {
      const double depth = pump - photon;
      if (depth > 0.0 && depth <= kRamanBandRadPerFs) {
        r.status = RamanStatus::StokesBand;
        r.fraction = std::max(r.fraction, depth / kRamanBandRadPerFs);
      }
    }
  }
  return r;
}

}  // namespace sfwm
