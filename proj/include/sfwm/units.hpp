#pragma once

#include <numbers>

// Repo-wide units: omega rad/fs, lambda um, k 1/um, time fs, L m, gamma 1/(W km).
namespace sfwm::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kC = 0.299792458;  // um/fs
inline constexpr double kMetersToMicrons = 1e6;
inline constexpr double kPerWattKmToPerWattMicron = 1e-9;

inline double omega_from_lambda(double lambda_um) { return 2.0 * kPi * kC / lambda_um; }
inline double lambda_from_omega(double omega) { return 2.0 * kPi * kC / omega; }

// 1 THz of ordinary frequency in rad/fs.
inline constexpr double kRadPerFsPerTHz = 2.0 * kPi * 1e-3;

// D [ps/(nm km)] = -(2 pi c / lambda^2) k2, k2 in fs^2/um, lambda in um.
// 299.792458 collects c and the unit factors.
inline double dispersion_parameter_from_k2(double k2_fs2_per_um, double lambda_um) {
  return -2.0 * kPi * 299.792458 * k2_fs2_per_um / (lambda_um * lambda_um);
}

inline double k2_from_dispersion_parameter(double d_ps_nm_km, double lambda_um) {
  return -d_ps_nm_km * lambda_um * lambda_um / (2.0 * kPi * 299.792458);
}

}  // namespace sfwm::units
