#include "sfwm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <ostream>

#include "sfwm/export.hpp"
#include "sfwm/io.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Run {
  std::string command;
  RunConfig rc;
  fs::path out_dir;
  std::ostream& err;
  bool quiet = false;
  ordered_json summary = ordered_json::object();
  std::vector<std::string> outputs;

  void note(const std::string& msg) const {
    if (!quiet) err << "sfwm " << command << ": " << msg << '\n';
  }
  std::string path(const std::string& name) const { return (out_dir / name).string(); }
  void wrote(const io::WrittenFiles& w) {
    for (const auto& p : w.paths) outputs.push_back(fs::path(p).filename().string());
  }
  void write(const std::string& name, const std::string& content) {
    io::write_atomic(path(name), content);
    outputs.push_back(name);
  }
};

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

template <class T>
const T& need(const std::optional<T>& section, const char* name) {
  if (!section) fail(ErrorKind::ConfigError, std::string("$.") + name + ": required by this subcommand");
  return *section;
}

PumpAxis pump_axis_of(const RunConfig& rc) {
  PumpAxis axis;
  if (rc.pumps.size() == 2) {
    axis.kind = PumpAxis::Kind::FixedPump2;
    axis.omega_p2 = rc.pump2().omega0;
  }
  return axis;
}

std::vector<ModeId> declared_modes(const FiberModel& f) {
  std::vector<ModeId> modes;
  if (f.kind == FiberKind::Tabulated)
    for (const auto& [m, t] : f.dispersion_tables) modes.push_back(m);
  else if (f.kind == FiberKind::TaylorSeries)
    for (const auto& [m, t] : f.taylor_modes) modes.push_back(m);
  else
    modes = {ModeId::parse("HE11x"), ModeId::parse("HE11y")};
  return modes;
}

void cmd_dispersion(Run& run) {
  const auto& sec = need(run.rc.dispersion, "dispersion");
  const auto& fiber = run.rc.fiber;
  const auto modes = sec.modes.empty() ? declared_modes(fiber) : sec.modes;
  std::string csv = "mode,lambda_um,omega_radfs,n_eff,k_per_um,k1_fs_per_um,k2_fs2_per_um,k3_fs3_per_um,k4_fs4_per_um,D_ps_per_nm_km\n";
  ordered_json zdw = ordered_json::object();
  const auto lambdas = uniform_axis(sec.lambda_min_um, sec.lambda_max_um, static_cast<std::size_t>(sec.samples));
  for (const auto& m : modes) {
    for (double lam : lambdas) {
      const double w = units::omega_from_lambda(lam);
      const auto d = mode_dispersion(fiber, m, w);
      csv += m.name() + ',' + io::fmt(lam) + ',' + io::fmt(w) + ',' + io::fmt(effective_index(fiber, m, w)) + ',' +
             io::fmt(d.k) + ',' + io::fmt(d.k1) + ',' + io::fmt(d.k2) + ',' + io::fmt(d.k3) + ',' + io::fmt(d.k4) +
             ',' + io::fmt(dispersion_parameter(fiber, m, lam)) + '\n';
    }
    ordered_json z = ordered_json::array();
    for (double l : find_zdw(fiber, m, sec.lambda_min_um, sec.lambda_max_um)) z.push_back(l);
    zdw[m.name()] = z;
  }
  run.write("dispersion.csv", csv);
  ordered_json j;
  j["format"] = "sfwm-dispersion";
  j["csv"] = "dispersion.csv";
  j["zdw_um"] = zdw;
  run.write("dispersion.json", j.dump(2) + "\n");
  run.summary["modes"] = modes.size();
  run.summary["zdw_um"] = zdw;
}

void cmd_contour(Run& run) {
  const auto& sec = need(run.rc.contour, "contour");
  const auto& proc = run.rc.process(sec.process);
  ContourOptions opt;
  opt.axis = sec.axis;
  const auto c = trace_contour(run.rc.fiber, proc,
                               uniform_axis(sec.pump_min, sec.pump_max, static_cast<std::size_t>(sec.pump_samples)),
                               uniform_axis(sec.detuning_min, sec.detuning_max, static_cast<std::size_t>(sec.detuning_samples)),
                               opt);
  run.wrote(io::export_contour(c, run.path("contour.csv")));
  int loops = 0;
  for (const auto& p : c.polylines) loops += p.closed;
  run.summary["process"] = proc.label;
  run.summary["points"] = c.points.size();
  run.summary["polylines"] = c.polylines.size();
  run.summary["closed_loops"] = loops;
  run.summary["loop_area"] = total_loop_area(c);
  if (c.empty) run.note("no phasematching solutions inside the window");
}

JsaSection jsa_section(const RunConfig& rc) { return rc.jsa ? *rc.jsa : JsaSection{}; }

void cmd_jsa(Run& run) {
  const auto sec = jsa_section(run.rc);
  const auto& proc = run.rc.process(sec.process);
  const auto grid = compute_jsa(run.rc, proc, sec);
  run.wrote(io::export_jsa(grid, run.path("jsa")));
  run.wrote(io::export_jsi(jsi_grid(grid), run.path("jsi")));
  run.summary["process"] = proc.label;
  run.summary["regime"] = to_string(grid.regime);
  run.summary["omega_s0_radfs"] = grid.omega_s0;
  run.summary["omega_i0_radfs"] = grid.omega_i0;
  run.summary["samples"] = {grid.ns(), grid.ni()};
}

void cmd_schmidt(Run& run) {
  JsaGrid grid;
  if (run.rc.schmidt && !run.rc.schmidt->input.empty()) {
    grid = io::import_jsa(run.rc.resolve(run.rc.schmidt->input));
  } else {
    const auto sec = jsa_section(run.rc);
    grid = compute_jsa(run.rc, run.rc.process(sec.process), sec);
  }
  const auto r = schmidt_decompose(grid);
  run.write("schmidt.json", io::schmidt_json(r));
  run.summary["K"] = r.K;
  run.summary["purity"] = r.purity;
  run.summary["g2"] = r.g2;
}

void cmd_negativity(Run& run) {
  const auto ns = run.rc.negativity.value_or(NegativitySection{});
  auto sec = jsa_section(run.rc);
  // Every process is evaluated on the first process's axes; only the exact integrand
  // handles a process that is not phasematched at those centers.
  if (sec.regime != JsaRegime::CounterPropagating) sec.regime = JsaRegime::Full;
  const auto& first = run.rc.processes.front().spec;
  const auto ref = compute_jsa(run.rc, first, sec);
  JsaAxes axes{ref.omega_s0, ref.omega_i0, ref.nu_s, ref.nu_i};
  std::vector<ProcessAmplitude> parts;
  for (const auto& e : run.rc.processes) {
    JsaGrid g;
    if (&e == &run.rc.processes.front()) {
      g = ref;
    } else {
      QuadratureOptions q;
      q.rel_tol = sec.rel_tol;
      g = sec.regime == JsaRegime::CounterPropagating
              ? jsa_counterprop(run.rc.fiber, e.spec, run.rc.pump1(), run.rc.pump2(), axes, q)
              : jsa_full(run.rc.fiber, e.spec, run.rc.pump1(), run.rc.pump2(), axes, q);
      g = normalize_jsi(g);
    }
    parts.push_back({e.spec, e.weight, g});
  }
  const auto state = build_multiprocess_state(parts);
  const auto r = log_negativity(state, {ns.bins, ns.strict});
  run.write("negativity.json", io::negativity_json(r));
  run.summary["ln_bits"] = r.ln;
  run.summary["converged"] = r.converged;
  if (!r.converged) run.note("log negativity changed when the bins were doubled");
}

void design_factorable(Run& run, const DesignSection& d) {
  const auto& proc = run.rc.process(d.process);
  PumpRange range;
  range.axis = pump_axis_of(run.rc);
  range.omega_lo = d.pump_min;
  range.omega_hi = d.pump_max;
  range.samples = d.pump_samples;
  range.detuning_lo = d.detuning_min;
  range.detuning_hi = d.detuning_max;
  range.detuning_samples = d.detuning_samples;
  range.sigma1 = run.rc.pump1().sigma;
  range.sigma2 = run.rc.pump2().sigma;
  const auto segments = factorable_search(run.rc.fiber, proc, range);
  std::vector<DesignCandidate> all;
  for (const auto& s : segments) {
    all.insert(all.end(), s.points.begin(), s.points.end());
    if (!s.warning.empty()) run.note(s.warning);
  }
  run.wrote(io::export_candidates(all, run.path("candidates")));
  run.summary["segments"] = segments.size();
  run.summary["candidates"] = all.size();
}

void design_symmetric(Run& run, const DesignSection& d) {
  const auto& proc = run.rc.process(d.process);
  const auto centers = solve_centers(run.rc, proc, jsa_section(run.rc));
  const auto terms = group_delay_terms(run.rc.fiber, proc, centers, run.rc.pump1().sigma, run.rc.pump2().sigma);
  const double sigma = symmetric_bandwidth_solve(terms, SolveFor::Sigma);
  const double length = symmetric_bandwidth_solve(terms, SolveFor::Length);
  auto at_sigma = group_delay_terms(run.rc.fiber, proc, centers, sigma, sigma);
  FiberModel resized = run.rc.fiber;
  resized.length_m = length;
  auto at_length = group_delay_terms(resized, proc, centers, run.rc.pump1().sigma, run.rc.pump1().sigma);
  const std::vector<DesignCandidate> cs = {make_candidate(run.rc.fiber, proc, at_sigma),
                                           make_candidate(resized, proc, at_length)};
  run.wrote(io::export_candidates(cs, run.path("candidates")));
  run.summary["sigma_rad_per_fs"] = sigma;
  run.summary["length_m"] = length;
  run.summary["T_s_fs"] = terms.T_s;
  run.summary["T_i_fs"] = terms.T_i;
  if (!cs.front().symmetric) run.note("T_s and T_i are not antisymmetric; the identity then does not guarantee a factorable state");
}

void design_ultrabroadband(Run& run, const DesignSection& d) {
  const auto r = ultrabroadband_search(run.rc.fiber, d.mode, d.scale_min, d.scale_max, d.lambda_min_um,
                                       d.lambda_max_um, d.scale_samples);
  ordered_json j;
  j["format"] = "sfwm-ultrabroadband";
  j["mode"] = d.mode.name();
  j["scale"] = r.scale;
  j["lambda0_um"] = r.lambda0_um;
  j["k2_fs2_per_um"] = r.k2;
  j["k3_fs3_per_um"] = r.k3;
  j["k4_fs4_per_um"] = r.k4;
  j["small_k3"] = r.small_k3;
  run.write("ultrabroadband.json", j.dump(2) + "\n");
  run.summary["scale"] = r.scale;
  run.summary["lambda0_um"] = r.lambda0_um;
  if (r.small_k3) run.note("k3 is nearly zero at the candidate");
}

void design_critical_power(Run& run, const DesignSection& d) {
  const auto& proc = run.rc.process(d.process);
  CriticalPowerOptions opt;
  opt.detuning_lo = d.detuning_min;
  opt.detuning_hi = d.detuning_max;
  opt.detuning_samples = d.detuning_samples;
  opt.start_power_w = d.start_power_w;
  const double p = critical_power(run.rc.fiber, proc, d.pump_lambda_um, opt);
  ordered_json j;
  j["format"] = "sfwm-critical-power";
  j["process"] = proc.label;
  j["pump_lambda_um"] = d.pump_lambda_um;
  j["critical_power_w"] = p;
  run.write("critical_power.json", j.dump(2) + "\n");
  run.summary["critical_power_w"] = p;
}

void design_tuning(Run& run, const DesignSection& d) {
  const auto& proc = run.rc.process(d.process);
  const auto rows = tuning_scan(run.rc.fiber, proc, d.scales, units::omega_from_lambda(d.pump_lambda_um),
                                d.detuning_min, d.detuning_max, d.detuning_samples);
  std::string csv = "scale,detuning_radfs,lambda_s_um,lambda_i_um,solved\n";
  int solved = 0;
  for (const auto& r : rows) {
    csv += io::fmt(r.scale) + ',' + io::fmt(r.detuning) + ',' + io::fmt(r.lambda_s_um) + ',' + io::fmt(r.lambda_i_um) +
           ',' + (r.solved ? "1" : "0") + '\n';
    solved += r.solved;
  }
  run.write("tuning.csv", csv);
  run.summary["rows"] = rows.size();
  run.summary["solved"] = solved;
}

void cmd_design(Run& run) {
  const auto& d = need(run.rc.design, "design");
  run.summary["task"] = d.task;
  if (d.task == "factorable") design_factorable(run, d);
  else if (d.task == "symmetric") design_symmetric(run, d);
  else if (d.task == "ultrabroadband") design_ultrabroadband(run, d);
  else if (d.task == "critical_power") design_critical_power(run, d);
  else design_tuning(run, d);
}

void cmd_charsim(Run& run) {
  const auto& c = need(run.rc.charsim, "charsim");
  JsaGrid truth;
  if (!c.input.empty()) {
    truth = io::import_jsa(run.rc.resolve(c.input));
  } else {
    const auto sec = jsa_section(run.rc);
    truth = compute_jsa(run.rc, run.rc.process(sec.process), sec);
  }
  const auto jsi = jsi_grid(truth);
  DetectorModel det = c.detector;
  det.seed = run.rc.seed;
  Reconstruction rec;
  if (c.method == "monochromator") {
    MonochromatorOptions opt;
    opt.passband_s = c.passband_s;
    opt.passband_i = c.passband_i;
    opt.dwell_s = c.dwell_s;
    opt.noiseless = c.noiseless;
    rec = sim_monochromator(jsi, c.steps_s, c.steps_i, c.pair_budget, det, opt);
  } else if (c.method == "ft") {
    rec = sim_ft_spectroscopy(truth, c.ft, det);
  } else if (c.method == "dispersive") {
    DispersiveOptions opt;
    opt.bin_ps = c.bin_ps;
    opt.noiseless = c.noiseless;
    opt.pair_budget = c.pair_budget;
    opt.dwell_s = c.dwell_s;
    rec = sim_dispersive_fiber(jsi, c.dispersion_ps_nm_km, c.length_km, det, opt);
  } else {
    SetOptions opt;
    opt.pair_budget = c.pair_budget;
    opt.relative_noise = c.relative_noise;
    opt.noiseless = c.noiseless;
    opt.dwell_s = c.dwell_s;
    opt.det = det;
    const double lo = c.seed_min.value_or(jsi.nu_i.front());
    const double hi = c.seed_max.value_or(jsi.nu_i.back());
    const int steps = c.seed_steps > 0 ? c.seed_steps : static_cast<int>(jsi.ni());
    rec = sim_set(jsi, lo, hi, steps, c.seed_photons, opt);
  }
  run.wrote(io::export_reconstruction(rec, run.path("reconstruction")));
  if (rec.resolution_warning) run.note("detector timing resolution limits the reconstruction");
  run.summary["method"] = c.method;
  run.summary["overlap"] = rec.metrics.overlap;
  run.summary["l1"] = rec.metrics.l1;
  run.summary["settings"] = rec.settings;
  run.summary["snr"] = number_or_null(rec.snr);
  run.summary["resolution_warning"] = rec.resolution_warning;
}

void dispatch(Run& run) {
  const auto& c = run.command;
  if (c == "validate") return;
  fs::create_directories(run.out_dir);
  if (c == "dispersion") cmd_dispersion(run);
  else if (c == "contour") cmd_contour(run);
  else if (c == "jsa") cmd_jsa(run);
  else if (c == "schmidt") cmd_schmidt(run);
  else if (c == "negativity") cmd_negativity(run);
  else if (c == "design") cmd_design(run);
  else if (c == "charsim") cmd_charsim(run);
  else fail(ErrorKind::InvalidArgument, "unknown subcommand '" + c + "'");
}

void print_summary(std::ostream& out, const std::string& command, const std::string& status, ordered_json body) {
  ordered_json j;
  j["command"] = command;
  j["status"] = status;
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  out << j.dump() << '\n';
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError: return kExitConfig;
    case ErrorKind::QuadratureNonConvergence:
    case ErrorKind::NotConverged:
    case ErrorKind::FaddeevaOverflow: return kExitNumeric;
    default: return kExitFailure;
  }
}

CenterFrequencies solve_centers(const RunConfig& rc, const ProcessSpec& process, const JsaSection& sec) {
  CenterFrequencies c{rc.pump1().omega0, rc.pump2().omega0, 0.0};
  if (sec.signal_omega) {
    c.omega_s = *sec.signal_omega;
    return c;
  }
  if (sec.regime == JsaRegime::CounterPropagating) {
    c.omega_s = c.omega_p1;
    return c;
  }
  const auto axis = pump_axis_of(rc);
  const auto roots = column_solutions(rc.fiber, process, axis, c.omega_p1, sec.detuning_min, sec.detuning_max, 2001,
                                      nonlinear_phase(rc.fiber, process));
  if (roots.empty())
    fail(ErrorKind::NotPhasematched, "no signal solution for '" + process.label + "' with detuning in [" +
                                         io::fmt(sec.detuning_min) + ", " + io::fmt(sec.detuning_max) + "] rad/fs");
  c.omega_s = axis.mean(c.omega_p1) + roots.back();
  return c;
}

JsaGrid compute_jsa(const RunConfig& rc, const ProcessSpec& process, const JsaSection& sec) {
  const auto& p1 = rc.pump1();
  const auto& p2 = rc.pump2();
  const auto centers = solve_centers(rc, process, sec);
  const auto n = static_cast<std::size_t>(sec.samples);
  QuadratureOptions q;
  q.rel_tol = sec.rel_tol;
  if (sec.regime == JsaRegime::CounterPropagating) {
    const double h = sec.half_span.value_or(4.0 * std::max(p1.sigma, p2.sigma));
    const auto axes = uniform_axes(centers.omega_s, centers.omega_i(), h, h, n, n);
    return normalize_jsi(jsa_counterprop(rc.fiber, process, p1, p2, axes, q));
  }
  const auto terms = group_delay_terms(rc.fiber, process, centers, p1.sigma, p2.sigma);
  const auto axes = sec.half_span
                        ? uniform_axes(centers.omega_s, centers.omega_i(), *sec.half_span, *sec.half_span, n, n)
                        : default_axes(terms, p1, p2, n);
  JsaGrid g;
  switch (sec.regime) {
    case JsaRegime::Full: g = jsa_full(rc.fiber, process, p1, p2, axes, q); break;
    case JsaRegime::Linearized: g = jsa_linearized(terms, p1, p2, axes); break;
    case JsaRegime::Walkoff:
    case JsaRegime::WalkoffGaussian: {
      WalkoffOptions w;
      w.gaussian_limit = sec.regime == JsaRegime::WalkoffGaussian;
      w.pre_delay_fs = sec.pre_delay_fs;
      g = jsa_dualpump_walkoff(terms, p1, p2, axes, w);
      break;
    }
    default: break;
  }
  return normalize_jsi(g);
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design and simulation of fiber photon-pair sources", "sfwm"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  for (const char* name : {"dispersion", "contour", "jsa", "schmidt", "negativity", "design", "charsim", "validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "RNG seed (overrides seed)");
    sub->add_flag("--quiet", quiet, "suppress notes on standard error");
  }
  std::string command = "sfwm";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sfwm: " << e.what() << '\n';
    print_summary(out, command, "error", {{"kind", "ConfigError"}, {"exit_code", kExitConfig}});
    return kExitConfig;
  }
  command = app.get_subcommands().front()->get_name();
  const bool seed_given = app.get_subcommands().front()->count("--seed") > 0;
  try {
    Run run{command, load_config(config_path), {}, err, quiet, {}, {}};
    if (seed_given) run.rc.seed = seed;
    run.out_dir = out_dir.empty() ? fs::path(run.rc.resolve(run.rc.output_dir)) : fs::path(out_dir);
    dispatch(run);
    ordered_json body = run.summary;
    if (command != "validate") body["out_dir"] = run.out_dir.string();
    body["outputs"] = run.outputs;
    print_summary(out, command, "ok", body);
    return kExitOk;
  } catch (const Error& e) {
    err << "sfwm " << command << ": " << e.what() << '\n';
    const int code = exit_code_for(e.kind());
    print_summary(out, command, "error", {{"kind", std::string(to_string(e.kind()))}, {"exit_code", code}});
    return code;
  } catch (const std::exception& e) {
    err << "sfwm " << command << ": " << e.what() << '\n';
    print_summary(out, command, "error", {{"kind", "Internal"}, {"exit_code", kExitFailure}});
    return kExitFailure;
  }
}

}  // namespace sfwm
