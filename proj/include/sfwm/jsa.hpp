#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sfwm/fiber_model.hpp"
#include "sfwm/kernels.hpp"
#include "sfwm/phasematch.hpp"

namespace sfwm {

using cplx = std::complex<double>;

// Gaussian pump, alpha(nu) ~ exp(-nu^2/sigma^2) exp(i chirp nu^2), unit L2 norm.
struct PumpSpec {
  double omega0 = 0.0;     // rad/fs
  double sigma = 0.0;      // rad/fs, 1/e amplitude half-width
  double power_w = 0.0;
  double chirp_fs2 = 0.0;
  double delay_fs = 0.0;   // arrival time, counter-propagating regime only
  void validate() const;
};

enum class JsaRegime { Full, Linearized, Walkoff, WalkoffGaussian, CounterPropagating };
std::string to_string(JsaRegime r);
JsaRegime parse_regime(const std::string& s);

// Detuning axes about the signal/idler centers.
struct JsaAxes {
  double omega_s0 = 0.0, omega_i0 = 0.0;
  std::vector<double> nu_s, nu_i;
  void validate() const;  // uniform, strictly increasing, >= 2 samples
};

JsaAxes uniform_axes(double omega_s0, double omega_i0, double half_span_s, double half_span_i,
                     std::size_t n_s, std::size_t n_i);

// +-4 marginal widths of the Gaussian-approximated linearized JSA.
JsaAxes default_axes(const GroupDelayTerms& terms, const PumpSpec& pump1, const PumpSpec& pump2,
                     std::size_t n = 256);

struct JsaGrid {
  std::vector<double> nu_s, nu_i;
  std::vector<cplx> amp;  // amp[is * nu_i.size() + ii]
  double omega_s0 = 0.0, omega_i0 = 0.0;
  JsaRegime regime = JsaRegime::Full;
  bool arbitrary_units = true;
  double norm_scale = 1.0;  // factor applied by normalize_jsi
  std::size_t ns() const { return nu_s.size(); }
  std::size_t ni() const { return nu_i.size(); }
  cplx& at(std::size_t is, std::size_t ii) { return amp[is * ni() + ii]; }
  const cplx& at(std::size_t is, std::size_t ii) const { return amp[is * ni() + ii]; }
  double dnu_s() const { return nu_s.size() > 1 ? nu_s[1] - nu_s[0] : 1.0; }
  double dnu_i() const { return nu_i.size() > 1 ? nu_i[1] - nu_i[0] : 1.0; }
  double norm2() const;  // sum |F|^2 dnu_s dnu_i
};

cplx pump_envelope(const PumpSpec& pump, double nu);

// Closed form of the integral of alpha1(u) alpha2(N - u) du.
cplx pump_convolution(const PumpSpec& pump1, const PumpSpec& pump2, double N);

struct QuadratureOptions {
  Exec exec = Exec::Parallel;
  double rel_tol = 1e-10;   // of the peak amplitude estimate
  double span_widths = 5.0; // integration half-range in effective pump widths
  int max_depth = 20;
};

JsaGrid jsa_full(const FiberModel& fiber, const ProcessSpec& process, const PumpSpec& pump1,
                 const PumpSpec& pump2, const JsaAxes& axes, const QuadratureOptions& opt = {});

JsaGrid jsa_linearized(const GroupDelayTerms& terms, const PumpSpec& pump1, const PumpSpec& pump2,
                       const JsaAxes& axes);

struct WalkoffOptions {
  bool gaussian_limit = false;
  std::optional<double> pre_delay_fs;  // default -tau_p/2
};

JsaGrid jsa_dualpump_walkoff(const GroupDelayTerms& terms, const PumpSpec& pump1,
                             const PumpSpec& pump2, const JsaAxes& axes,
                             const WalkoffOptions& opt = {});

// pump1 forward, pump2 backward; tau = pump2.delay_fs - pump1.delay_fs.
JsaGrid jsa_counterprop(const FiberModel& fiber, const ProcessSpec& process,
                        const PumpSpec& pump1, const PumpSpec& pump2, const JsaAxes& axes,
                        const QuadratureOptions& opt = {});

// Extent of the region where the two counter-propagating pulses overlap: half the sum of
// the pulse lengths (2/sigma) / k1, in metres.
double cp_overlap_length_m(const FiberModel& fiber, const ProcessSpec& process,
                           const PumpSpec& pump1, const PumpSpec& pump2);

JsaGrid normalize_jsi(const JsaGrid& grid);

std::vector<double> jsi(const JsaGrid& grid);

// Major-axis angle of |F|^2 from second image moments, degrees in (-90, 90].
double jsi_orientation(const JsaGrid& grid);

}  // namespace sfwm
