#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sfwm {

enum class FiberKind { StepIndexSurrogate, Tabulated, TaylorSeries };

enum class ModeLabel { HE11x, HE11y, TE01, TM01, Custom };

enum class Polarization { X, Y, Unpolarized };

struct ModeId {
  ModeLabel label = ModeLabel::HE11x;
  std::string tag;  // only for Custom

  static ModeId parse(std::string_view text);
  std::string name() const;
  auto operator<=>(const ModeId&) const = default;
};

Polarization polarization_of(const ModeId& mode);

struct DispersionTable {
  std::vector<double> lambda_um;
  std::vector<double> n_eff;
  bool operator==(const DispersionTable&) const = default;
};

// k(omega) = sum_n beta_n(s) (omega - omega_ref)^n / n!, beta_n(s) = beta[n] + (s - 1) dbeta_ds[n]
struct TaylorDispersion {
  double omega_ref = 0.0;         // rad/fs
  std::vector<double> beta;       // fs^n / um
  std::vector<double> dbeta_ds;   // same units, may be shorter than beta
  bool operator==(const TaylorDispersion&) const = default;
};

struct FiberModel {
  FiberKind kind = FiberKind::StepIndexSurrogate;
  double core_radius_um = 1.0;
  double index_contrast = 0.01;
  double birefringence = 0.0;
  double scale_factor = 1.0;
  double length_m = 1.0;
  std::map<std::string, double> gamma_table;  // process label -> 1/(W km)
  std::map<ModeId, DispersionTable> dispersion_tables;
  std::map<ModeId, TaylorDispersion> taylor_modes;

  void validate() const;
  bool operator==(const FiberModel&) const = default;
};

struct DispersionSample {
  double omega = 0.0;
  double k = 0.0;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
  bool converged = true;
};

double material_index(double lambda_um);

// Effective index including the birefringence offset.
double effective_index(const FiberModel& fiber, const ModeId& mode, double omega);
double propagation_constant(const FiberModel& fiber, const ModeId& mode, double omega);
DispersionSample mode_dispersion(const FiberModel& fiber, const ModeId& mode, double omega);
double dispersion_parameter(const FiberModel& fiber, const ModeId& mode, double lambda_um);

std::vector<double> find_zdw(const FiberModel& fiber, const ModeId& mode, double lambda_min_um,
                             double lambda_max_um, int scan_samples = 241);

FiberModel scale_fiber(const FiberModel& fiber, double factor);

FiberModel load_dispersion_table(const std::string& path);
void export_dispersion_table(const FiberModel& fiber, const std::string& path);

}  // namespace sfwm
