#pragma once

#include <vector>

#include "sfwm/jsa.hpp"

namespace sfwm {

struct SchmidtReport {
  std::vector<double> lambda;  // descending, sums to 1
  double K = 1.0;
  double purity = 1.0;
  double g2 = 2.0;
  double hom_visibility = 1.0;
};

inline constexpr double kSchmidtTruncation = 1e-12;

// SVD of the area-weighted amplitude matrix F_ij sqrt(dnu_s dnu_i).
SchmidtReport schmidt_decompose(const JsaGrid& grid);

// K -> P, g2, V
SchmidtReport metrics_from_schmidt_number(double K);

struct BrightnessReport {
  double flux = 0.0;          // arbitrary units
  bool clamped = false;       // L replaced by L_max
  double l_max_m = 0.0;       // infinity for degenerate pumps
  double l_eff_m = 0.0;
};

// flux ~ P1 P2 sigma L_eff gamma1 gamma2, sigma the geometric mean pump bandwidth.
// L_max: inter-pump walk-off equals l_max_scale times the shorter pump duration 2/sigma.
BrightnessReport brightness_estimate(const FiberModel& fiber, const ProcessSpec& process,
                                     const PumpSpec& pump1, const PumpSpec& pump2,
                                     double l_max_scale = 1.0);

struct ProcessAmplitude {
  ProcessSpec process;
  cplx weight{1.0, 0.0};
  JsaGrid grid;
};

// Coherent sum of processes, labelled by the signal and idler modes.
struct MultiProcessState {
  struct Entry {
    ProcessSpec process;
    cplx weight;
    JsaGrid grid;
    ModeId signal_label, idler_label;
  };
  std::vector<Entry> entries;
  std::vector<ModeId> signal_labels() const;
  std::vector<ModeId> idler_labels() const;
  double norm2() const;
};

MultiProcessState build_multiprocess_state(const std::vector<ProcessAmplitude>& entries);

// Joint (signal mode, idler mode) density matrix with both frequencies traced out.
struct PolarizationState {
  std::vector<ModeId> signal_labels, idler_labels;
  std::vector<cplx> rho;  // row-major, index a * idler_labels.size() + b
  std::size_t dim() const { return signal_labels.size() * idler_labels.size(); }
};
PolarizationState polarization_state(const MultiProcessState& state);

struct NegativityReport {
  double ln = 0.0;  // bits
  int bins = 0;
  bool converged = false;
  double ln_doubled = 0.0;  // value at twice the bins, for the convergence check
};

struct NegativityOptions {
  int bins = 32;
  bool strict = false;  // SinglePolarization instead of LN = 0
};

// Split (signal polarization | binned idler frequency), signal frequency and idler
// polarization traced out.
NegativityReport log_negativity(const MultiProcessState& state, const NegativityOptions& opt = {});

}  // namespace sfwm
