#pragma once

#include <optional>
#include <string>

#include "sfwm/fiber_model.hpp"

namespace sfwm {

enum class Direction { Forward, Backward };

struct Wave {
  ModeId mode;
  Direction direction = Direction::Forward;
};

struct ProcessSpec {
  std::string label = "default";
  Wave pump1, pump2, signal, idler;
  double pump1_power_w = 0.0;
  double pump2_power_w = 0.0;
  double kappa_weight = 1.0;
  int table_row = 0;  // 1..6 for the standard polarization combinations, 0 otherwise
  // Overrides of the fiber gamma_table entry for this label, 1/(W km).
  std::optional<double> gamma1_per_w_km, gamma2_per_w_km;

  bool co_propagating() const;
  void validate() const;
};

// Rows 1..6: xx->xx, yy->yy, xy->xy, xy->yx, xx->yy, yy->xx on the fundamental mode.
ProcessSpec standard_process(int row);

// phi_nl = gamma1 P1 + gamma2 P2 in 1/um, from the process overrides only.
double nonlinear_phase(const ProcessSpec& process);
// Same, falling back to fiber.gamma_table[process.label].
double nonlinear_phase(const FiberModel& fiber, const ProcessSpec& process);

// Direction-signed mismatch with phi_nl subtracted.
double delta_k(const FiberModel& fiber, const ProcessSpec& process, double omega_p1,
               double omega_p2, double omega_s);
// Same with phi_nl supplied (saves the gamma lookup inside loops).
double delta_k_with_phase(const FiberModel& fiber, const ProcessSpec& process, double omega_p1,
                          double omega_p2, double omega_s, double phi_nl);
// Sum of all four propagation constants.
double kappa_sum(const FiberModel& fiber, const ProcessSpec& process, double omega_p1,
                 double omega_p2, double omega_s);

enum class DelayVariant { Eq5, Sec13_2 };

struct CenterFrequencies {
  double omega_p1 = 0.0, omega_p2 = 0.0, omega_s = 0.0;
  double omega_i() const { return omega_p1 + omega_p2 - omega_s; }
};

struct GroupDelayTerms {
  double tau_s = 0.0, tau_i = 0.0, tau_p = 0.0;  // fs
  double T_s = 0.0, T_i = 0.0;                   // fs
  DelayVariant variant = DelayVariant::Eq5;
  double length_m = 0.0, sigma1 = 0.0, sigma2 = 0.0;
  CenterFrequencies centers;
};

inline constexpr double kDefaultPhasematchTolerance = 1e-6;  // 1/um

GroupDelayTerms group_delay_terms(const FiberModel& fiber, const ProcessSpec& process,
                                  const CenterFrequencies& centers, double sigma1, double sigma2,
                                  DelayVariant variant = DelayVariant::Eq5,
                                  double tolerance = kDefaultPhasematchTolerance);

struct PhasematchAngles {
  double theta_sisi_deg = 0.0;  // JSI orientation in the (omega_s, omega_i) plane
  double theta_dwp_deg = 0.0;   // contour angle in the (omega_p, Delta) plane
};

PhasematchAngles phasematch_angle(const GroupDelayTerms& terms);
PhasematchAngles phasematch_angle(double T_s, double T_i);

struct FrequencyPoint {
  double omega_p1 = 0.0, omega_p2 = 0.0, omega_s = 0.0, omega_i = 0.0;
};

enum class RamanStatus { Clear, StokesBand };

struct RamanReport {
  RamanStatus status = RamanStatus::Clear;
  double fraction = 0.0;
};

inline constexpr double kRamanBandRadPerFs = 2.0 * 3.14159265358979323846 * 0.05;  // 50 THz

RamanReport raman_overlap(const ProcessSpec& process, const FrequencyPoint& point);

}  // namespace sfwm
