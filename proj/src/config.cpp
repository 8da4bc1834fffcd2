#include "sfwm/config.hpp"

#include <filesystem>
#include <initializer_list>
#include <json.hpp>
#include <limits>

#include "sfwm/errors.hpp"
#include "sfwm/io.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
  fail(ErrorKind::ConfigError, path + ": " + msg);
}

// Typed access to one JSON object; every key must be declared by the caller.
class Section {
 public:
  Section(const json& j, std::string path, const std::vector<std::string>& allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_, "expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool ok = false;
      for (const auto& a : allowed) ok = ok || it.key() == a;
      if (!ok) config_error(at(it.key()), "unknown key");
    }
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }
  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const { return j_.at(key); }

  double number(const char* key, double fallback) const {
    return has(key) ? required_number(key) : fallback;
  }
  std::optional<double> optional_number(const char* key) const {
    if (!has(key)) return std::nullopt;
    return required_number(key);
  }
  double required_number(const char* key) const {
    if (!has(key)) config_error(at(key), "required");
    const auto& v = j_.at(key);
    if (!v.is_number()) config_error(at(key), "expected a number");
    return v.get<double>();
  }
  double positive(const char* key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0.0)) config_error(at(key), "must be positive");
    return v;
  }
  double nonnegative(const char* key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v >= 0.0)) config_error(at(key), "must be nonnegative");
    return v;
  }
  int integer(const char* key, int fallback, int min = std::numeric_limits<int>::min()) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) config_error(at(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < min || x > std::numeric_limits<int>::max())
      config_error(at(key), "must be at least " + std::to_string(min));
    return static_cast<int>(x);
  }
  bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) config_error(at(key), "expected true or false");
    return v.get<bool>();
  }
  std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) config_error(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::string choice(const char* key, const std::string& fallback,
                     std::initializer_list<const char*> options) const {
    const auto v = text(key, fallback);
    for (const char* o : options)
      if (v == o) return v;
    std::string list;
    for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
    config_error(at(key), "'" + v + "' is not one of " + list);
  }
  ModeId mode(const char* key, const std::string& fallback) const {
    const auto t = text(key, fallback);
    try {
      return ModeId::parse(t);
    } catch (const Error& e) {
      config_error(at(key), e.what());
    }
  }
  std::vector<double> numbers(const char* key) const {
    if (!has(key)) return {};
    const auto& v = j_.at(key);
    if (!v.is_array()) config_error(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) config_error(at(key) + "[" + std::to_string(k) + "]", "expected a number");
      out.push_back(v[k].get<double>());
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
};

// Accepts either a wavelength or an angular frequency key.
double frequency(const Section& s, const char* lambda_key, const char* omega_key, bool required) {
  if (s.has(lambda_key) && s.has(omega_key)) config_error(s.at(omega_key), std::string("conflicts with ") + lambda_key);
  if (s.has(lambda_key)) return units::omega_from_lambda(s.positive(lambda_key, 1.0));
  if (s.has(omega_key)) return s.positive(omega_key, 1.0);
  if (required) config_error(s.at(lambda_key), std::string("required (or ") + omega_key + ")");
  return 0.0;
}

FiberModel parse_fiber(const json& j, const std::string& origin) {
  Section s(j, "$.fiber",
            {"kind", "core_radius_um", "index_contrast", "birefringence", "scale_factor", "length_m",
             "gamma_per_w_km", "table_path", "taylor_modes"});
  const auto kind = s.choice("kind", "surrogate", {"surrogate", "tabulated", "taylor"});
  FiberModel f;
  if (kind == "tabulated") {
    if (!s.has("table_path")) config_error(s.at("table_path"), "required for a tabulated fiber");
    auto p = std::filesystem::path(s.text("table_path", ""));
    if (p.is_relative()) p = std::filesystem::path(origin) / p;
    f = load_dispersion_table(p.string());
  } else if (s.has("table_path")) {
    config_error(s.at("table_path"), "only valid for kind 'tabulated'");
  }
  if (kind == "taylor") {
    f.kind = FiberKind::TaylorSeries;
    if (!s.has("taylor_modes") || !s.raw("taylor_modes").is_array() || s.raw("taylor_modes").empty())
      config_error(s.at("taylor_modes"), "a non-empty array is required for a taylor fiber");
    const auto& arr = s.raw("taylor_modes");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      Section m(arr[k], s.at("taylor_modes") + "[" + std::to_string(k) + "]",
                {"mode", "omega_ref_rad_per_fs", "beta_fsn_per_um", "dbeta_ds_fsn_per_um"});
      TaylorDispersion t;
      t.omega_ref = m.positive("omega_ref_rad_per_fs", 1.0);
      t.beta = m.numbers("beta_fsn_per_um");
      t.dbeta_ds = m.numbers("dbeta_ds_fsn_per_um");
      if (t.beta.empty()) config_error(m.at("beta_fsn_per_um"), "required");
      f.taylor_modes[m.mode("mode", "HE11x")] = t;
    }
  } else if (s.has("taylor_modes")) {
    config_error(s.at("taylor_modes"), "only valid for kind 'taylor'");
  }
  if (kind == "surrogate") f.kind = FiberKind::StepIndexSurrogate;
  f.core_radius_um = s.positive("core_radius_um", f.core_radius_um);
  f.index_contrast = s.positive("index_contrast", f.index_contrast);
  f.birefringence = s.number("birefringence", f.birefringence);
  f.scale_factor = s.positive("scale_factor", f.scale_factor);
  f.length_m = s.positive("length_m", f.length_m);
  if (s.has("gamma_per_w_km")) {
    const auto& g = s.raw("gamma_per_w_km");
    if (!g.is_object()) config_error(s.at("gamma_per_w_km"), "expected an object of label: number");
    for (auto it = g.begin(); it != g.end(); ++it) {
      if (!it.value().is_number()) config_error(s.at("gamma_per_w_km") + "." + it.key(), "expected a number");
      f.gamma_table[it.key()] = it.value().get<double>();
    }
  }
  try {
    f.validate();
  } catch (const Error& e) {
    config_error("$.fiber", e.what());
  }
  return f;
}

Wave parse_wave(const json& j, const std::string& path, const Wave& fallback) {
  if (j.is_string()) {
    try {
      return {ModeId::parse(j.get<std::string>()), fallback.direction};
    } catch (const Error& e) {
      config_error(path, e.what());
    }
  }
  Section s(j, path, {"mode", "direction"});
  Wave w = fallback;
  if (s.has("mode")) w.mode = s.mode("mode", "HE11x");
  if (s.has("direction")) w.direction = s.choice("direction", "+", {"+", "-"}) == "+" ? Direction::Forward : Direction::Backward;
  return w;
}

ProcessEntry parse_process(const json& j, const std::string& path, std::size_t index) {
  Section s(j, path,
            {"label", "row", "pump1", "pump2", "signal", "idler", "pump1_power_w", "pump2_power_w",
             "gamma1_per_w_km", "gamma2_per_w_km", "weight_re", "weight_im"});
  ProcessEntry e;
  const int row = s.integer("row", 0, 0);
  if (row > 6) config_error(s.at("row"), "must be 0..6");
  if (row > 0) {
    e.spec = standard_process(row);
  } else {
    e.spec.label = "p" + std::to_string(index + 1);
  }
  e.spec.label = s.text("label", e.spec.label);
  if (s.has("pump1")) e.spec.pump1 = parse_wave(s.raw("pump1"), s.at("pump1"), e.spec.pump1);
  if (s.has("pump2")) e.spec.pump2 = parse_wave(s.raw("pump2"), s.at("pump2"), e.spec.pump2);
  if (s.has("signal")) e.spec.signal = parse_wave(s.raw("signal"), s.at("signal"), e.spec.signal);
  if (s.has("idler")) e.spec.idler = parse_wave(s.raw("idler"), s.at("idler"), e.spec.idler);
  if (s.has("pump1_power_w")) e.spec.pump1_power_w = s.nonnegative("pump1_power_w", 0.0);
  if (s.has("pump2_power_w")) e.spec.pump2_power_w = s.nonnegative("pump2_power_w", 0.0);
  e.spec.gamma1_per_w_km = s.optional_number("gamma1_per_w_km");
  e.spec.gamma2_per_w_km = s.optional_number("gamma2_per_w_km");
  e.weight = {s.number("weight_re", 1.0), s.number("weight_im", 0.0)};
  return e;
}

PumpSpec parse_pump(const json& j, const std::string& path) {
  Section s(j, path, {"lambda_um", "omega_rad_per_fs", "sigma_rad_per_fs", "power_w", "chirp_fs2", "delay_fs"});
  PumpSpec p;
  p.omega0 = frequency(s, "lambda_um", "omega_rad_per_fs", true);
  p.sigma = s.positive("sigma_rad_per_fs", 0.01);
  p.power_w = s.nonnegative("power_w", 0.0);
  p.chirp_fs2 = s.number("chirp_fs2", 0.0);
  p.delay_fs = s.number("delay_fs", 0.0);
  return p;
}

DispersionSection parse_dispersion(const json& j) {
  Section s(j, "$.dispersion", {"modes", "lambda_min_um", "lambda_max_um", "samples"});
  DispersionSection d;
  if (s.has("modes")) {
    const auto& arr = s.raw("modes");
    if (!arr.is_array()) config_error(s.at("modes"), "expected an array of mode names");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const auto p = s.at("modes") + "[" + std::to_string(k) + "]";
      if (!arr[k].is_string()) config_error(p, "expected a mode name");
      try {
        d.modes.push_back(ModeId::parse(arr[k].get<std::string>()));
      } catch (const Error& e) {
        config_error(p, e.what());
      }
    }
  }
  d.lambda_min_um = s.positive("lambda_min_um", d.lambda_min_um);
  d.lambda_max_um = s.positive("lambda_max_um", d.lambda_max_um);
  if (d.lambda_max_um <= d.lambda_min_um) config_error(s.at("lambda_max_um"), "must exceed lambda_min_um");
  d.samples = s.integer("samples", d.samples, 2);
  return d;
}

void check_window(const Section& s, const char* lo_key, double lo, double hi) {
  if (!(hi > lo)) config_error(s.at(lo_key), "window is empty");
}

ContourSection parse_contour(const json& j, const RunConfig& rc) {
  Section s(j, "$.contour",
            {"pump_axis", "omega_p2_rad_per_fs", "lambda_p2_um", "pump_min_rad_per_fs", "pump_max_rad_per_fs",
             "pump_samples", "detuning_min_rad_per_fs", "detuning_max_rad_per_fs", "detuning_samples", "process"});
  ContourSection c;
  const auto axis = s.choice("pump_axis", "degenerate", {"degenerate", "fixed_pump2"});
  if (axis == "fixed_pump2") {
    c.axis.kind = PumpAxis::Kind::FixedPump2;
    c.axis.omega_p2 = frequency(s, "lambda_p2_um", "omega_p2_rad_per_fs", false);
    if (c.axis.omega_p2 == 0.0) c.axis.omega_p2 = rc.pump2().omega0;
  }
  const double w0 = rc.pump1().omega0;
  c.pump_min = s.positive("pump_min_rad_per_fs", 0.9 * w0);
  c.pump_max = s.positive("pump_max_rad_per_fs", 1.1 * w0);
  check_window(s, "pump_min_rad_per_fs", c.pump_min, c.pump_max);
  c.pump_samples = s.integer("pump_samples", c.pump_samples, 64);
  c.detuning_min = s.number("detuning_min_rad_per_fs", -0.4 * w0);
  c.detuning_max = s.number("detuning_max_rad_per_fs", 0.4 * w0);
  check_window(s, "detuning_min_rad_per_fs", c.detuning_min, c.detuning_max);
  c.detuning_samples = s.integer("detuning_samples", c.detuning_samples, 64);
  c.process = s.text("process", "");
  return c;
}

JsaSection parse_jsa(const json& j) {
  Section s(j, "$.jsa",
            {"regime", "signal_omega_rad_per_fs", "signal_lambda_um", "detuning_min_rad_per_fs",
             "detuning_max_rad_per_fs", "half_span_rad_per_fs", "samples", "rel_tol", "pre_delay_fs", "process"});
  JsaSection out;
  const auto regime = s.choice("regime", "full", {"full", "linearized", "walkoff", "walkoff_gaussian", "counterprop"});
  out.regime = parse_regime(regime);
  const double ws = frequency(s, "signal_lambda_um", "signal_omega_rad_per_fs", false);
  if (ws > 0.0) out.signal_omega = ws;
  out.detuning_min = s.nonnegative("detuning_min_rad_per_fs", out.detuning_min);
  out.detuning_max = s.positive("detuning_max_rad_per_fs", out.detuning_max);
  check_window(s, "detuning_min_rad_per_fs", out.detuning_min, out.detuning_max);
  if (s.has("half_span_rad_per_fs")) out.half_span = s.positive("half_span_rad_per_fs", 1.0);
  out.samples = s.integer("samples", out.samples, 8);
  out.rel_tol = s.positive("rel_tol", out.rel_tol);
  out.pre_delay_fs = s.optional_number("pre_delay_fs");
  out.process = s.text("process", "");
  return out;
}

DesignSection parse_design(const json& j, const RunConfig& rc) {
  Section head(j, "$.design",
               {"task", "pump_min_rad_per_fs", "pump_max_rad_per_fs", "pump_samples", "detuning_min_rad_per_fs",
                "detuning_max_rad_per_fs", "detuning_samples", "mode", "scale_min", "scale_max", "scale_samples",
                "lambda_min_um", "lambda_max_um", "pump_lambda_um", "start_power_w", "scales", "process"});
  DesignSection d;
  d.task = head.choice("task", d.task, {"factorable", "symmetric", "ultrabroadband", "critical_power", "tuning"});
  // Each task accepts only its own keys.
  const auto keys = [&]() -> std::vector<std::string> {
    if (d.task == "factorable")
      return {"task", "pump_min_rad_per_fs", "pump_max_rad_per_fs", "pump_samples", "detuning_min_rad_per_fs",
              "detuning_max_rad_per_fs", "detuning_samples", "process"};
    if (d.task == "symmetric") return {"task", "process"};
    if (d.task == "ultrabroadband")
      return {"task", "mode", "scale_min", "scale_max", "scale_samples", "lambda_min_um", "lambda_max_um"};
    if (d.task == "critical_power")
      return {"task", "pump_lambda_um", "detuning_min_rad_per_fs", "detuning_max_rad_per_fs", "detuning_samples",
              "start_power_w", "process"};
    return {"task", "scales", "pump_lambda_um", "detuning_min_rad_per_fs", "detuning_max_rad_per_fs",
            "detuning_samples", "process"};
  }();
  Section s(j, "$.design", keys);
  const double w0 = rc.pump1().omega0;
  d.pump_min = s.positive("pump_min_rad_per_fs", 0.95 * w0);
  d.pump_max = s.positive("pump_max_rad_per_fs", 1.05 * w0);
  check_window(s, "pump_min_rad_per_fs", d.pump_min, d.pump_max);
  d.pump_samples = s.integer("pump_samples", d.pump_samples, 3);
  d.detuning_min = s.number("detuning_min_rad_per_fs", d.detuning_min);
  d.detuning_max = s.number("detuning_max_rad_per_fs", d.detuning_max);
  check_window(s, "detuning_min_rad_per_fs", d.detuning_min, d.detuning_max);
  d.detuning_samples = s.integer("detuning_samples", d.task == "critical_power" ? 1601 : d.detuning_samples, 16);
  d.mode = s.mode("mode", "HE11x");
  d.scale_min = s.positive("scale_min", d.scale_min);
  d.scale_max = s.positive("scale_max", d.scale_max);
  check_window(s, "scale_min", d.scale_min, d.scale_max);
  d.scale_samples = s.integer("scale_samples", d.scale_samples, 2);
  d.lambda_min_um = s.positive("lambda_min_um", d.lambda_min_um);
  d.lambda_max_um = s.positive("lambda_max_um", d.lambda_max_um);
  check_window(s, "lambda_min_um", d.lambda_min_um, d.lambda_max_um);
  d.pump_lambda_um = s.positive("pump_lambda_um", units::lambda_from_omega(w0));
  d.start_power_w = s.positive("start_power_w", d.start_power_w);
  d.scales = s.numbers("scales");
  if (d.task == "tuning" && d.scales.empty()) config_error(s.at("scales"), "required for task 'tuning'");
  for (std::size_t k = 0; k < d.scales.size(); ++k)
    if (!(d.scales[k] > 0.0)) config_error(s.at("scales") + "[" + std::to_string(k) + "]", "must be positive");
  d.process = s.text("process", "");
  return d;
}

DetectorModel parse_detector(const json& j, const std::string& path) {
  Section s(j, path, {"efficiency", "dark_rate_hz", "jitter_ps", "window_ps"});
  DetectorModel d;
  d.efficiency = s.number("efficiency", d.efficiency);
  d.dark_rate_hz = s.nonnegative("dark_rate_hz", d.dark_rate_hz);
  d.jitter_ps = s.nonnegative("jitter_ps", d.jitter_ps);
  d.window_ps = s.positive("window_ps", d.window_ps);
  try {
    d.validate();
  } catch (const Error& e) {
    config_error(path, e.what());
  }
  return d;
}

CharsimSection parse_charsim(const json& j) {
  Section head(j, "$.charsim",
               {"method", "input", "detector", "steps_s", "steps_i", "pair_budget", "passband_s_rad_per_fs",
                "passband_i_rad_per_fs", "dwell_s", "noiseless", "mode", "filter_bins", "offset_bins",
                "delay_step_fs", "delay_samples", "dispersion_ps_per_nm_km", "length_km", "bin_ps",
                "seed_min_rad_per_fs", "seed_max_rad_per_fs", "seed_steps", "seed_photons", "relative_noise"});
  CharsimSection c;
  c.method = head.choice("method", c.method, {"monochromator", "ft", "dispersive", "set"});
  const auto keys = [&]() -> std::vector<std::string> {
    if (c.method == "monochromator")
      return {"method", "input", "detector", "steps_s", "steps_i", "pair_budget", "passband_s_rad_per_fs",
              "passband_i_rad_per_fs", "dwell_s", "noiseless"};
    if (c.method == "ft")
      return {"method", "input", "detector", "mode", "filter_bins", "offset_bins", "delay_step_fs",
              "delay_samples", "noiseless", "pair_budget", "dwell_s"};
    if (c.method == "dispersive")
      return {"method", "input", "detector", "dispersion_ps_per_nm_km", "length_km", "bin_ps", "noiseless",
              "pair_budget", "dwell_s"};
    return {"method", "input", "detector", "seed_min_rad_per_fs", "seed_max_rad_per_fs", "seed_steps",
            "seed_photons", "relative_noise", "noiseless", "pair_budget", "dwell_s"};
  }();
  Section s(j, "$.charsim", keys);
  c.input = s.text("input", "");
  if (s.has("detector")) c.detector = parse_detector(s.raw("detector"), s.at("detector"));
  c.steps_s = s.integer("steps_s", c.steps_s, 2);
  c.steps_i = s.integer("steps_i", c.steps_i, 2);
  c.pair_budget = s.positive("pair_budget", c.pair_budget);
  c.passband_s = s.nonnegative("passband_s_rad_per_fs", c.passband_s);
  c.passband_i = s.nonnegative("passband_i_rad_per_fs", c.passband_i);
  c.dwell_s = s.positive("dwell_s", c.dwell_s);
  c.noiseless = s.flag("noiseless", c.method != "monochromator");
  const auto mode = s.choice("mode", "twoD", {"oneD", "twoD", "diagonal"});
  c.ft.mode = parse_ft_mode(mode);
  c.ft.filter_bins = s.integer("filter_bins", c.ft.filter_bins, 0);
  c.ft.offset_bins = s.integer("offset_bins", c.ft.offset_bins, 0);
  c.ft.delay_step_fs = s.nonnegative("delay_step_fs", c.ft.delay_step_fs);
  c.ft.delay_samples = s.integer("delay_samples", c.ft.delay_samples, 0);
  c.ft.noiseless = c.noiseless;
  c.ft.pair_budget = c.pair_budget;
  c.ft.dwell_s = c.dwell_s;
  c.dispersion_ps_nm_km = s.number("dispersion_ps_per_nm_km", c.dispersion_ps_nm_km);
  if (c.dispersion_ps_nm_km == 0.0) config_error(s.at("dispersion_ps_per_nm_km"), "must be nonzero");
  c.length_km = s.positive("length_km", c.length_km);
  c.bin_ps = s.nonnegative("bin_ps", c.bin_ps);
  c.seed_min = s.optional_number("seed_min_rad_per_fs");
  c.seed_max = s.optional_number("seed_max_rad_per_fs");
  if (c.seed_min.has_value() != c.seed_max.has_value())
    config_error(s.at("seed_min_rad_per_fs"), "seed_min_rad_per_fs and seed_max_rad_per_fs go together");
  if (c.seed_min && !(*c.seed_max > *c.seed_min)) config_error(s.at("seed_min_rad_per_fs"), "window is empty");
  c.seed_steps = s.integer("seed_steps", c.seed_steps, 0);
  c.seed_photons = s.positive("seed_photons", c.seed_photons);
  c.relative_noise = s.nonnegative("relative_noise", c.relative_noise);
  return c;
}

}  // namespace

const ProcessSpec& RunConfig::process(const std::string& label) const {
  if (processes.empty()) fail(ErrorKind::ConfigError, "$.processes: at least one process is required");
  if (label.empty()) return processes.front().spec;
  for (const auto& p : processes)
    if (p.spec.label == label) return p.spec;
  fail(ErrorKind::ConfigError, "process '" + label + "' is not declared in $.processes");
}

std::string RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_relative() ? (std::filesystem::path(origin_dir) / p).string() : path;
}

RunConfig parse_config(const std::string& text, const std::string& origin_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("$: not valid JSON: ") + e.what());
  }
  Section s(root, "$",
            {"$schema", "description", "fiber", "processes", "pumps", "output_dir", "seed", "dispersion", "contour",
             "jsa", "schmidt", "negativity", "design", "charsim"});
  RunConfig rc;
  rc.origin_dir = origin_dir;
  s.text("$schema", "");
  s.text("description", "");
  if (!s.has("fiber")) config_error("$.fiber", "required");
  rc.fiber = parse_fiber(s.raw("fiber"), origin_dir);

  if (!s.has("pumps")) config_error("$.pumps", "required");
  const auto& pumps = s.raw("pumps");
  if (!pumps.is_array() || pumps.empty() || pumps.size() > 2)
    config_error("$.pumps", "expected an array of one or two pumps");
  for (std::size_t k = 0; k < pumps.size(); ++k) rc.pumps.push_back(parse_pump(pumps[k], "$.pumps[" + std::to_string(k) + "]"));

  if (s.has("processes")) {
    const auto& procs = s.raw("processes");
    if (!procs.is_array() || procs.empty()) config_error("$.processes", "expected a non-empty array");
    for (std::size_t k = 0; k < procs.size(); ++k) {
      const auto path = "$.processes[" + std::to_string(k) + "]";
      auto e = parse_process(procs[k], path, k);
      // Pump powers come from the pump section unless the process overrides them.
      if (!procs[k].contains("pump1_power_w")) e.spec.pump1_power_w = rc.pump1().power_w;
      if (!procs[k].contains("pump2_power_w")) e.spec.pump2_power_w = rc.pump2().power_w;
      try {
        e.spec.validate();
      } catch (const Error& err) {
        config_error(path, err.what());
      }
      for (const auto& prev : rc.processes)
        if (prev.spec.label == e.spec.label) config_error(path + ".label", "duplicate label '" + e.spec.label + "'");
      rc.processes.push_back(e);
    }
  } else {
    ProcessEntry e;
    e.spec = standard_process(1);
    e.spec.pump1_power_w = rc.pump1().power_w;
    e.spec.pump2_power_w = rc.pump2().power_w;
    rc.processes.push_back(e);
  }

  rc.output_dir = s.text("output_dir", rc.output_dir);
  if (s.has("seed")) {
    const auto& v = s.raw("seed");
    if (!v.is_number_unsigned()) config_error("$.seed", "expected a nonnegative integer");
    rc.seed = v.get<std::uint64_t>();
  }
  if (s.has("dispersion")) rc.dispersion = parse_dispersion(s.raw("dispersion"));
  if (s.has("contour")) rc.contour = parse_contour(s.raw("contour"), rc);
  if (s.has("jsa")) rc.jsa = parse_jsa(s.raw("jsa"));
  if (s.has("schmidt")) {
    Section sc(s.raw("schmidt"), "$.schmidt", {"input"});
    rc.schmidt = SchmidtSection{sc.text("input", "")};
  }
  if (s.has("negativity")) {
    Section n(s.raw("negativity"), "$.negativity", {"bins", "strict"});
    rc.negativity = NegativitySection{n.integer("bins", 32, 2), n.flag("strict", false)};
  }
  if (s.has("design")) rc.design = parse_design(s.raw("design"), rc);
  if (s.has("charsim")) rc.charsim = parse_charsim(s.raw("charsim"));

  for (const auto* label : {rc.contour ? &rc.contour->process : nullptr, rc.jsa ? &rc.jsa->process : nullptr,
                            rc.design ? &rc.design->process : nullptr})
    if (label) rc.process(*label);
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(text, dir.empty() ? "." : dir.string());
}

}  // namespace sfwm
