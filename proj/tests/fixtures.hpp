#pragma once

#include <string>
#include <vector>

#include "sfwm/fiber_model.hpp"
#include "sfwm/phasematch.hpp"
#include "sfwm/units.hpp"

namespace fixtures {

inline const sfwm::ModeId kHx = sfwm::ModeId::parse("HE11x");
inline const sfwm::ModeId kHy = sfwm::ModeId::parse("HE11y");

// Same Taylor coefficients on all four standard modes.
inline sfwm::FiberModel taylor_fiber(double omega_ref, std::vector<double> beta,
                                     std::vector<double> dbeta = {}, double length_m = 0.1) {
  sfwm::FiberModel f;
  f.kind = sfwm::FiberKind::TaylorSeries;
  f.length_m = length_m;
  for (const char* m : {"HE11x", "HE11y", "TE01", "TM01"})
    f.taylor_modes[sfwm::ModeId::parse(m)] = {omega_ref, beta, dbeta};
  return f;
}

// k2 = beta2 + beta4 x^2 / 2: anomalous between the ZDWs at omega_ref -+ 0.2 rad/fs.
inline constexpr double kTwoZdwRef = 2.4;
inline constexpr double kTwoZdwBeta2 = -0.001;
inline constexpr double kTwoZdwBeta4 = 0.05;
inline sfwm::FiberModel two_zdw_fiber(double length_m = 0.1) {
  return taylor_fiber(kTwoZdwRef, {11.69, 4.9, kTwoZdwBeta2, 0.0, kTwoZdwBeta4}, {}, length_m);
}

// x and y fundamental modes split by a constant birefringence dn (y is the slow axis
// shifted by dn omega / c in k).
inline sfwm::FiberModel birefringent_fiber(double dn, double length_m, double k2 = 0.03,
                                           double k3 = 0.03) {
  const double db1 = dn / sfwm::units::kC, db0 = db1 * 2.4;
  sfwm::FiberModel f;
  f.kind = sfwm::FiberKind::TaylorSeries;
  f.length_m = length_m;
  f.taylor_modes[kHx] = {2.4, {11.69, 4.9, k2, k3}, {}};
  f.taylor_modes[kHy] = {2.4, {11.69 + db0, 4.9 + db1, k2, k3}, {}};
  return f;
}

inline sfwm::ProcessSpec single_mode_process(double power_w = 0.0, double gamma = 1e4) {
  sfwm::ProcessSpec p = sfwm::standard_process(1);
  p.pump1_power_w = p.pump2_power_w = power_w;
  p.gamma1_per_w_km = p.gamma2_per_w_km = gamma;
  return p;
}

inline sfwm::FiberModel surrogate(double a, double delta, double length_m = 0.1) {
  sfwm::FiberModel f;
  f.core_radius_um = a;
  f.index_contrast = delta;
  f.length_m = length_m;
  return f;
}

}  // namespace fixtures
