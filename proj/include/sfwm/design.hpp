#pragma once

#include <string>
#include <vector>

#include "sfwm/contour.hpp"
#include "sfwm/phasematch.hpp"

namespace sfwm {

inline constexpr double kGamma = 0.193;
inline constexpr double kSymmetryTolerance = 0.05;
inline constexpr double kSegmentEdgeTolerance = 1e-4;  // fs^2, |T_s T_i| at segment ends
inline constexpr double kSmallK3 = 1e-4;               // fs^3/um

struct DesignCandidate {
  std::string process_label;
  double omega_p1 = 0.0, omega_p2 = 0.0, omega_s = 0.0, omega_i = 0.0;
  double sigma1 = 0.0, sigma2 = 0.0;  // rad/fs
  double length_m = 0.0;
  double scale = 1.0;
  double T_s = 0.0, T_i = 0.0;
  double theta_deg = 0.0;
  double predicted_K = 0.0;    // Gaussian approximation of the linearized JSA
  double delta_k = 0.0;        // at the centers, 1/um
  bool factorable = false;     // T_s T_i <= 0, up to the segment-edge tolerance
  bool symmetric = false;      // |T_s + T_i| within kSymmetryTolerance
  double eq8_residual = 0.0;   // 2 Gamma sigma^2 |T_s T_i| - 1
  bool raman = false;          // signal or idler in the Stokes band
};

struct FactorableSegment {
  std::vector<DesignCandidate> points;  // first and last are refined boundary points
  int track = 0;                        // rank of the root among the column solutions
  bool degenerate = false;              // T_s = T_i = 0 everywhere
  std::string warning;
};

struct PumpRange {
  PumpAxis axis;
  double omega_lo = 0.0, omega_hi = 0.0;  // pump-axis range, rad/fs
  int samples = 121;
  double detuning_lo = 0.0, detuning_hi = 0.0;  // signal detuning window
  int detuning_samples = 801;
  double sigma1 = 0.01, sigma2 = 0.01;
};

// Contour points with T_s T_i <= 0, split into contiguous segments per root track.
std::vector<FactorableSegment> factorable_search(const FiberModel& fiber,
                                                 const ProcessSpec& process,
                                                 const PumpRange& range,
                                                 Exec exec = Exec::Parallel);

// Fills the derived fields of a candidate from its group-delay terms.
DesignCandidate make_candidate(const FiberModel& fiber, const ProcessSpec& process,
                               const GroupDelayTerms& terms, double scale = 1.0);

enum class SolveFor { Sigma, Length };

// Sigma: 1/sqrt(2 Gamma |T_s T_i|) at terms.sigma1 geometry.
// Length: fiber length (m) that satisfies the identity at sigma = terms.sigma1.
double symmetric_bandwidth_solve(const GroupDelayTerms& terms, SolveFor solve_for);

struct UltrabroadbandResult {
  double scale = 1.0;
  double lambda0_um = 0.0;
  double k2 = 0.0, k3 = 0.0, k4 = 0.0;  // residuals at the candidate
  bool small_k3 = false;
};

UltrabroadbandResult ultrabroadband_search(const FiberModel& fiber, const ModeId& mode,
                                           double scale_lo, double scale_hi,
                                           double lambda_lo_um, double lambda_hi_um,
                                           int scale_samples = 41);

// Half-width of the central phasematching lobe: smallest detuning > 0 where |L dk| = 2 pi.
double phasematch_bandwidth(const FiberModel& fiber, const ProcessSpec& process,
                            double omega_p, double max_detuning, int samples = 2001);

struct CriticalPowerOptions {
  double detuning_lo = 0.0, detuning_hi = 0.0;
  int detuning_samples = 1601;
  double start_power_w = 1e-3;
};

// Per-column positive-detuning solution count at pump power P on each pump (P1 = P2 = P).
int column_count(const FiberModel& fiber, const ProcessSpec& process, double omega_p,
                 double power_w, const CriticalPowerOptions& opt);

// Power at which the 2 positive-detuning solutions vanish, bracketed to 1%.
double critical_power(const FiberModel& fiber, const ProcessSpec& process, double pump_lambda_um,
                      const CriticalPowerOptions& opt);

struct TuningRow {
  double scale = 1.0;
  double detuning = 0.0;  // outer-branch detuning, rad/fs
  double lambda_s_um = 0.0, lambda_i_um = 0.0;
  bool solved = false;
};

std::vector<TuningRow> tuning_scan(const FiberModel& fiber, const ProcessSpec& process,
                                   const std::vector<double>& scales, double omega_p,
                                   double detuning_lo, double detuning_hi,
                                   int detuning_samples = 1601, Exec exec = Exec::Parallel);

}  // namespace sfwm
