#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfwm/charsim.hpp"
#include "sfwm/contour.hpp"
#include "sfwm/design.hpp"
#include "sfwm/jsa.hpp"
#include "sfwm/quantum.hpp"

namespace sfwm {

struct DispersionSection {
  std::vector<ModeId> modes;
  double lambda_min_um = 0.8, lambda_max_um = 2.0;
  int samples = 121;
};

struct ContourSection {
  PumpAxis axis;
  double pump_min = 0.0, pump_max = 0.0;
  int pump_samples = 128;
  double detuning_min = 0.0, detuning_max = 0.0;
  int detuning_samples = 128;
  std::string process;  // label, empty: first
};

struct JsaSection {
  JsaRegime regime = JsaRegime::Full;
  std::optional<double> signal_omega;
  double detuning_min = 0.005, detuning_max = 0.8;  // phasematching search window
  std::optional<double> half_span;                  // else default_axes
  int samples = 128;
  double rel_tol = 1e-10;
  std::optional<double> pre_delay_fs;
  std::string process;
};

struct SchmidtSection {
  std::string input;  // JSA sidecar, empty: compute from the jsa section
};

struct NegativitySection {
  int bins = 32;
  bool strict = false;
};

struct DesignSection {
  std::string task = "factorable";
  double pump_min = 0.0, pump_max = 0.0;
  int pump_samples = 121;
  double detuning_min = 0.005, detuning_max = 0.8;
  int detuning_samples = 801;
  ModeId mode;
  double scale_min = 0.9, scale_max = 1.1;
  int scale_samples = 41;
  double lambda_min_um = 0.6, lambda_max_um = 2.0;
  double pump_lambda_um = 0.0;
  double start_power_w = 1e-3;
  std::vector<double> scales;
  std::string process;
};

struct CharsimSection {
  std::string method = "set";
  std::string input;
  DetectorModel detector;
  int steps_s = 16, steps_i = 16;
  double pair_budget = 1e6;
  double passband_s = 0.0, passband_i = 0.0;
  double dwell_s = 1.0;
  bool noiseless = true;
  FtOptions ft;
  double dispersion_ps_nm_km = -120.0, length_km = 0.4, bin_ps = 0.0;
  std::optional<double> seed_min, seed_max;
  int seed_steps = 0;
  double seed_photons = 100.0;
  double relative_noise = 0.0;
};

struct ProcessEntry {
  ProcessSpec spec;
  cplx weight{1.0, 0.0};
};

struct RunConfig {
  std::string origin_dir;  // relative paths resolve here
  FiberModel fiber;
  std::vector<ProcessEntry> processes;
  std::vector<PumpSpec> pumps;  // one (degenerate) or two
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::optional<DispersionSection> dispersion;
  std::optional<ContourSection> contour;
  std::optional<JsaSection> jsa;
  std::optional<SchmidtSection> schmidt;
  std::optional<NegativitySection> negativity;
  std::optional<DesignSection> design;
  std::optional<CharsimSection> charsim;

  const PumpSpec& pump1() const { return pumps.front(); }
  const PumpSpec& pump2() const { return pumps.back(); }
  const ProcessSpec& process(const std::string& label) const;
  std::string resolve(const std::string& path) const;
};

// Unknown keys and type errors raise ConfigError naming the JSON path, e.g. $.fiber.radius.
RunConfig parse_config(const std::string& json_text, const std::string& origin_dir = ".");
RunConfig load_config(const std::string& path);

}  // namespace sfwm
