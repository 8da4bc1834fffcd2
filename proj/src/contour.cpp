#include "sfwm/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "sfwm/errors.hpp"
#include "sfwm/numerics.hpp"

namespace sfwm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool positive(double v) { return v >= 0.0; }

void check_axis(const std::vector<double>& a, const char* name) {
  if (a.size() < 2) fail(ErrorKind::InvalidArgument, std::string(name) + " needs >= 2 samples");
  for (std::size_t k = 1; k < a.size(); ++k)
    if (!(a[k] > a[k - 1])) fail(ErrorKind::InvalidArgument, std::string(name) + " must be strictly increasing");
}

struct Edge {
  std::size_t i, j;
  bool vertical;  // vertical edges run along y at fixed x_i
};

double safe_eval(const ScalarField& f, double x, double y) {
  try {
    return f(x, y);
  } catch (const Error&) {
    return kNaN;
  }
}

}  // namespace

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Inner: return "inner";
    case Branch::Outer: return "outer";
    default: return "line";
  }
}

std::vector<double> uniform_axis(double lo, double hi, std::size_t n) {
  std::vector<double> a(n);
  for (std::size_t k = 0; k < n; ++k)
    a[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return a;
}

PhasematchContour trace_zero_set(const ScalarField& f, const std::vector<double>& xs,
                                 const std::vector<double>& ys, double tolerance, Exec exec) {
  check_axis(xs, "pump axis");
  check_axis(ys, "detuning axis");
  const std::size_t nx = xs.size(), ny = ys.size();
  std::vector<double> v;
  kernels::fill(exec, v, nx, ny, [&](std::size_t i, std::size_t j) { return safe_eval(f, xs[i], ys[j]); });
  auto val = [&](std::size_t i, std::size_t j) { return v[i * ny + j]; };
  auto crosses = [](double a, double b) {
    return std::isfinite(a) && std::isfinite(b) && positive(a) != positive(b);
  };

  // edge id -> point index
  std::vector<long> edge_point(2 * nx * ny, -1);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      if (i + 1 < nx && crosses(val(i, j), val(i + 1, j))) {
        edge_point[2 * (i * ny + j)] = static_cast<long>(edges.size());
        edges.push_back({i, j, false});
      }
      if (j + 1 < ny && crosses(val(i, j), val(i, j + 1))) {
        edge_point[2 * (i * ny + j) + 1] = static_cast<long>(edges.size());
        edges.push_back({i, j, true});
      }
    }
  }

  PhasematchContour c;
  c.pump_axis = xs;
  c.detuning_axis = ys;
  std::vector<ContourPoint> pts;
  kernels::map(exec, pts, edges.size(), [&](std::size_t e) {
    const Edge& ed = edges[e];
    ContourPoint p;
    if (ed.vertical) {
      const double x = xs[ed.i];
      auto g = [&](double y) { return f(x, y); };
      p.omega_p = x;
      p.detuning = numerics::find_root(g, ys[ed.j], ys[ed.j + 1], val(ed.i, ed.j), val(ed.i, ed.j + 1),
                                       1e-15 * (std::abs(ys[ed.j]) + std::abs(ys[ed.j + 1])) + 1e-300);
      p.column = static_cast<int>(ed.i);
    } else {
      const double y = ys[ed.j];
      auto g = [&](double x) { return f(x, y); };
      p.detuning = y;
      p.omega_p = numerics::find_root(g, xs[ed.i], xs[ed.i + 1], val(ed.i, ed.j), val(ed.i + 1, ed.j),
                                      1e-15 * (std::abs(xs[ed.i]) + std::abs(xs[ed.i + 1])) + 1e-300);
    }
    return p;
  });
  for (const auto& p : pts) {
    const double r = f(p.omega_p, p.detuning);
    if (!(std::abs(r) < tolerance))
      fail(ErrorKind::NotConverged, "contour vertex refinement left |f| = " + std::to_string(std::abs(r)));
  }

  // link crossings cell by cell
  std::vector<std::array<long, 2>> adj(pts.size(), {-1, -1});
  auto link = [&](long a, long b) {
    for (long* s : {&adj[a][0], &adj[a][1]})
      if (*s < 0) { *s = b; break; }
    for (long* s : {&adj[b][0], &adj[b][1]})
      if (*s < 0) { *s = a; break; }
  };
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const double v00 = val(i, j), v10 = val(i + 1, j), v11 = val(i + 1, j + 1), v01 = val(i, j + 1);
      if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v11) || !std::isfinite(v01)) continue;
      const long B = edge_point[2 * (i * ny + j)], T = edge_point[2 * (i * ny + j + 1)];
      const long Lf = edge_point[2 * (i * ny + j) + 1], R = edge_point[2 * ((i + 1) * ny + j) + 1];
      std::vector<long> e;
      for (long k : {B, R, T, Lf})
        if (k >= 0) e.push_back(k);
      if (e.size() == 2) {
        link(e[0], e[1]);
      } else if (e.size() == 4) {
        const double centre = 0.25 * (v00 + v10 + v11 + v01);
        if (positive(centre) == positive(v00)) {
          link(B, R);
          link(Lf, T);
        } else {
          link(B, Lf);
          link(R, T);
        }
      }
    }
  }

  // walk chains: open ones from their ends first, then cycles
  const double dx = (xs.back() - xs.front()) / static_cast<double>(nx - 1);
  const double dy = (ys.back() - ys.front()) / static_cast<double>(ny - 1);
  std::vector<char> seen(pts.size(), 0);
  auto walk = [&](std::size_t start) {
    Polyline line;
    long prev = -1, cur = static_cast<long>(start);
    while (cur >= 0 && !seen[cur]) {
      seen[cur] = 1;
      line.points.push_back(static_cast<std::size_t>(cur));
      long next = -1;
      for (long n : adj[cur])
        if (n >= 0 && n != prev && !seen[n]) {
          next = n;
          break;
        }
      prev = cur;
      cur = next;
    }
    return line;
  };
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const int deg = (adj[k][0] >= 0) + (adj[k][1] >= 0);
    if (seen[k] || deg > 1) continue;
    Polyline line = walk(k);
    const auto& a = pts[line.points.front()];
    const auto& b = pts[line.points.back()];
    line.closed = line.points.size() > 2 && std::abs(a.omega_p - b.omega_p) <= dx &&
                  std::abs(a.detuning - b.detuning) <= dy;
    c.polylines.push_back(std::move(line));
  }
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (seen[k]) continue;
    Polyline line = walk(k);
    line.closed = true;
    c.polylines.push_back(std::move(line));
  }
  for (std::size_t id = 0; id < c.polylines.size(); ++id)
    for (std::size_t k : c.polylines[id].points) pts[k].loop_id = static_cast<int>(id);

  c.points = std::move(pts);
  c.columns.assign(nx, {});
  for (std::size_t k = 0; k < c.points.size(); ++k)
    if (c.points[k].column >= 0) c.columns[static_cast<std::size_t>(c.points[k].column)].push_back(k);
  for (auto& col : c.columns)
    std::sort(col.begin(), col.end(), [&](std::size_t a, std::size_t b) {
      return c.points[a].detuning < c.points[b].detuning;
    });
  c.empty = c.points.empty();
  return c;
}

ScalarField phase_mismatch_field(const FiberModel& fiber, const ProcessSpec& process,
                                 const PumpAxis& axis) {
  const double phi = nonlinear_phase(fiber, process);
  return [fiber, process, axis, phi](double omega_p, double detuning) {
    const double w1 = axis.pump1(omega_p), w2 = axis.pump2(omega_p);
    try {
      return delta_k_with_phase(fiber, process, w1, w2, axis.mean(omega_p) + detuning, phi);
    } catch (const Error&) {
      return kNaN;
    }
  };
}

PhasematchContour trace_contour(const FiberModel& fiber, const ProcessSpec& process,
                                const std::vector<double>& pump_axis,
                                const std::vector<double>& detuning_axis,
                                const ContourOptions& options) {
  if (pump_axis.size() < 64 || detuning_axis.size() < 64)
    fail(ErrorKind::InvalidArgument, "contour grids need >= 64 samples per axis");
  return trace_zero_set(phase_mismatch_field(fiber, process, options.axis), pump_axis,
                        detuning_axis, options.tolerance, options.exec);
}

PhasematchContour classify_branches(PhasematchContour c) {
  for (auto& p : c.points) p.branch = Branch::Line;
  std::vector<char> labelled(c.points.size(), 0);
  for (const auto& col : c.columns) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t k : col) (c.points[k].detuning >= 0.0 ? pos : neg).push_back(k);
    for (auto* half : {&pos, &neg}) {
      std::sort(half->begin(), half->end(), [&](std::size_t a, std::size_t b) {
        return std::abs(c.points[a].detuning) < std::abs(c.points[b].detuning);
      });
      for (std::size_t k : *half) labelled[k] = 1;
      if (half->size() >= 2) {
        c.points[half->front()].branch = Branch::Inner;
        c.points[half->back()].branch = Branch::Outer;
      }
    }
  }
  // off-column crossings inherit from the nearest column point along their polyline
  for (const auto& line : c.polylines) {
    const auto& idx = line.points;
    const std::size_t n = idx.size();
    for (std::size_t a = 0; a < n; ++a) {
      if (labelled[idx[a]]) continue;
      for (std::size_t d = 1; d < n; ++d) {
        long hit = -1;
        for (long cand : {static_cast<long>(a) - static_cast<long>(d), static_cast<long>(a + d)}) {
          long q = cand;
          if (line.closed) q = ((q % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
          if (q < 0 || q >= static_cast<long>(n)) continue;
          if (labelled[idx[static_cast<std::size_t>(q)]]) {
            hit = q;
            break;
          }
        }
        if (hit >= 0) {
          c.points[idx[a]].branch = c.points[idx[static_cast<std::size_t>(hit)]].branch;
          break;
        }
      }
    }
  }
  return c;
}

double loop_area(const PhasematchContour& c, const Polyline& line) {
  if (!line.closed || line.points.size() < 3) return 0.0;
  double s = 0.0;
  const std::size_t n = line.points.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = c.points[line.points[k]];
    const auto& b = c.points[line.points[(k + 1) % n]];
    s += a.omega_p * b.detuning - b.omega_p * a.detuning;
  }
  return 0.5 * std::abs(s);
}

double total_loop_area(const PhasematchContour& c) {
  double s = 0.0;
  for (const auto& l : c.polylines) s += loop_area(c, l);
  return s;
}

std::vector<double> column_solutions(const FiberModel& fiber, const ProcessSpec& process,
                                     const PumpAxis& axis, double omega_p, double lo, double hi,
                                     int samples, double phi_nl) {
  auto g = [&](double d) {
    try {
      return delta_k_with_phase(fiber, process, axis.pump1(omega_p), axis.pump2(omega_p),
                                axis.mean(omega_p) + d, phi_nl);
    } catch (const Error&) {
      return kNaN;
    }
  };
  std::vector<double> roots;
  double dp = lo, gp = g(lo);
  for (int s = 1; s < samples; ++s) {
    const double d = lo + (hi - lo) * s / (samples - 1);
    const double gd = g(d);
    if (std::isfinite(gp) && std::isfinite(gd) && positive(gp) != positive(gd))
      roots.push_back(numerics::find_root(g, dp, d, gp, gd, 1e-15 * (std::abs(dp) + std::abs(d)) + 1e-300));
    dp = d;
    gp = gd;
  }
  return roots;
}

}  // namespace sfwm
