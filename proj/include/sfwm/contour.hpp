#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "sfwm/kernels.hpp"
#include "sfwm/phasematch.hpp"

namespace sfwm {

enum class Branch { Inner, Outer, Line };
std::string to_string(Branch b);

struct ContourPoint {
  double omega_p = 0.0;
  double detuning = 0.0;
  Branch branch = Branch::Line;
  int loop_id = -1;
  int column = -1;  // pump-axis index for crossings on a column edge, else -1
};

struct Polyline {
  std::vector<std::size_t> points;
  bool closed = false;
};

struct PhasematchContour {
  std::vector<double> pump_axis;
  std::vector<double> detuning_axis;
  std::vector<ContourPoint> points;
  std::vector<Polyline> polylines;               // loop_id indexes this
  std::vector<std::vector<std::size_t>> columns;  // per pump sample, sorted by detuning
  bool empty = true;
};

// How the pump axis maps to the two pump frequencies.
struct PumpAxis {
  enum class Kind { Degenerate, FixedPump2 } kind = Kind::Degenerate;
  double omega_p2 = 0.0;  // FixedPump2 only

  double pump1(double omega_p) const { return omega_p; }
  double pump2(double omega_p) const { return kind == Kind::Degenerate ? omega_p : omega_p2; }
  double mean(double omega_p) const { return 0.5 * (pump1(omega_p) + pump2(omega_p)); }
};

inline constexpr double kContourTolerance = 1e-9;  // 1/um

struct ContourOptions {
  PumpAxis axis;
  Exec exec = Exec::Parallel;
  double tolerance = kContourTolerance;
};

using ScalarField = std::function<double(double x, double y)>;

// Marching squares over any field sampled on x_axis by y_axis, crossings refined on
// edges to |f| < tolerance. Non-finite samples mark cells to skip.
PhasematchContour trace_zero_set(const ScalarField& f, const std::vector<double>& x_axis,
                                 const std::vector<double>& y_axis, double tolerance,
                                 Exec exec = Exec::Parallel);

// Delta k in (omega_p, Delta) coordinates, omega_s = mean pump + Delta. NaN where non-physical
// or outside the dispersion model.
ScalarField phase_mismatch_field(const FiberModel& fiber, const ProcessSpec& process,
                                 const PumpAxis& axis);

PhasematchContour trace_contour(const FiberModel& fiber, const ProcessSpec& process,
                                const std::vector<double>& pump_axis,
                                const std::vector<double>& detuning_axis,
                                const ContourOptions& options = {});

PhasematchContour classify_branches(PhasematchContour contour);

double loop_area(const PhasematchContour& contour, const Polyline& line);
double total_loop_area(const PhasematchContour& contour);

// All detunings in [lo, hi] with delta_k = 0 at a fixed pump-axis value, ascending.
std::vector<double> column_solutions(const FiberModel& fiber, const ProcessSpec& process,
                                     const PumpAxis& axis, double omega_p, double lo, double hi,
                                     int samples, double phi_nl);

std::vector<double> uniform_axis(double lo, double hi, std::size_t n);

}  // namespace sfwm
