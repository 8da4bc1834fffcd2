#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sfwm/contour.hpp"
#include "sfwm/jsa.hpp"

namespace sfwm {

// Joint spectral intensity on detuning axes, w[is * ni + ii].
struct JsiGrid {
  std::vector<double> nu_s, nu_i;
  std::vector<double> w;
  double omega_s0 = 0.0, omega_i0 = 0.0;
  std::size_t ns() const { return nu_s.size(); }
  std::size_t ni() const { return nu_i.size(); }
  double& at(std::size_t is, std::size_t ii) { return w[is * ni() + ii]; }
  double at(std::size_t is, std::size_t ii) const { return w[is * ni() + ii]; }
  double dnu_s() const { return nu_s.size() > 1 ? nu_s[1] - nu_s[0] : 1.0; }
  double dnu_i() const { return nu_i.size() > 1 ? nu_i[1] - nu_i[0] : 1.0; }
};

JsiGrid jsi_grid(const JsaGrid& grid);
// Real nonnegative amplitude sqrt(JSI), for Schmidt analysis of an intensity estimate.
JsaGrid amplitude_from_jsi(const JsiGrid& grid);

struct DetectorModel {
  double efficiency = 1.0;
  double dark_rate_hz = 0.0;
  double jitter_ps = 0.0;        // Gaussian sigma
  double window_ps = 1000.0;     // coincidence window
  std::uint64_t seed = 1;
  void validate() const;
};

std::uint64_t splitmix64(std::uint64_t x);
// Independent stream seed for one measurement setting.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t setting);

struct ReconstructionMetrics {
  double l1 = 0.0;       // sum |p - q|, in [0, 2]
  double overlap = 0.0;  // sum sqrt(p q), in [0, 1]
};

// Estimate is bilinearly resampled onto the truth axes (zero outside its span); both
// are normalized to unit sum before comparison.
ReconstructionMetrics reconstruction_error(const JsiGrid& truth, const JsiGrid& estimate);

struct Reconstruction {
  JsiGrid estimate;  // unit sum, nonnegative
  ReconstructionMetrics metrics;
  std::size_t settings = 0;
  double dwell_s = 1.0;
  double acquisition_proxy_s = 0.0;  // settings x dwell
  double detected_counts = 0.0;      // expected, signal only
  double snr = 0.0;                  // peak-setting signal over its noise
  bool noiseless = true;
  bool resolution_warning = false;
  // diagonal Fourier mode
  double sigma_d = std::numeric_limits<double>::quiet_NaN();
  double sigma_a = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double implied_purity = std::numeric_limits<double>::quiet_NaN();
  // dispersive fiber arrival-time histogram, counts[is * t_i.size() + ii]
  std::vector<double> t_s_ps, t_i_ps, histogram;
};

struct MonochromatorOptions {
  double passband_s = 0.0, passband_i = 0.0;  // rad/fs full width, 0: setting spacing
  double dwell_s = 1.0;
  bool noiseless = false;
  Exec exec = Exec::Parallel;
};

// pair_budget: pairs emitted during one setting's dwell.
Reconstruction sim_monochromator(const JsiGrid& truth, int steps_s, int steps_i,
                                 double pair_budget, const DetectorModel& det,
                                 const MonochromatorOptions& opt = {});

enum class FtMode { OneD, TwoD, Diagonal };
std::string to_string(FtMode m);
FtMode parse_ft_mode(const std::string& s);

struct FtOptions {
  FtMode mode = FtMode::TwoD;
  // Frequencies are measured from a reference placed offset_bins grid steps below the
  // band, so every component is a positive cosine frequency.
  int filter_bins = 2;      // bins zeroed next to each frequency axis
  int offset_bins = 0;      // 0: filter_bins + 2
  double delay_step_fs = 0.0;  // 0: pi / (N dnu), the exact cosine-transform grid
  int delay_samples = 0;       // 0: N + 1
  bool noiseless = true;
  double pair_budget = 1e6;    // per delay setting when noisy
  double dwell_s = 1.0;
  Exec exec = Exec::Parallel;
};

Reconstruction sim_ft_spectroscopy(const JsaGrid& truth, const FtOptions& opt,
                                   const DetectorModel& det = {});

// Arrival-time offset (ps) of a wavelength offset (nm) after dispersion D (ps/(nm km)).
inline double dispersive_delay_ps(double d_ps_nm_km, double length_km, double dlambda_nm) {
  return d_ps_nm_km * length_km * dlambda_nm;
}

struct DispersiveOptions {
  double bin_ps = 0.0;  // 0: a quarter of the narrowest cell's time extent
  bool noiseless = true;
  double pair_budget = 1e6;  // total pairs
  double dwell_s = 1.0;
  double warn_ratio = 10.0;  // warning below this time-spread / jitter ratio
};

Reconstruction sim_dispersive_fiber(const JsiGrid& truth, double d_ps_nm_km, double length_km,
                                    const DetectorModel& det, const DispersiveOptions& opt = {});

struct SetOptions {
  double pair_budget = 1e6;  // pairs per seed setting
  double relative_noise = 0.0;
  bool noiseless = true;
  double dwell_s = 1.0;
  DetectorModel det;
};

// seed_photons: mean seed photons per mode (stimulation gain factor).
Reconstruction sim_set(const JsiGrid& truth, double seed_lo, double seed_hi, int seed_steps,
                       double seed_photons, const SetOptions& opt = {});

}  // namespace sfwm
