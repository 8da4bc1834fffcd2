#include "sfwm/export.hpp"

#include <cmath>
#include <filesystem>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "sfwm/errors.hpp"
#include "sfwm/io.hpp"

namespace sfwm::io {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// 17-digit numbers survive a dump/parse round trip, so the sidecars keep them as numbers.
ordered_json axis_json(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json parse_json_file(const std::string& path) {
  try {
    return ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
}

std::vector<double> to_vector(const ordered_json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorKind::ParseError, what + " must be an array");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) fail(ErrorKind::ParseError, what + " must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

std::string sibling(const std::string& sidecar, const std::string& name) {
  return (fs::path(sidecar).parent_path() / name).string();
}

std::vector<double> flatten(const std::vector<std::vector<double>>& rows, std::size_t nr,
                            std::size_t nc, const std::string& path) {
  if (rows.size() != nr || (nr > 0 && rows.front().size() != nc))
    fail(ErrorKind::ParseError, path + ": matrix shape does not match the sidecar axes");
  std::vector<double> out;
  out.reserve(nr * nc);
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::string bool_col(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string matrix_csv(const std::vector<double>& values, std::size_t rows, std::size_t cols) {
  std::string s;
  s.reserve(values.size() * 24);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) s += ',';
      s += fmt(values[r * cols + c]);
    }
    s += '\n';
  }
  return s;
}

WrittenFiles export_jsa(const JsaGrid& g, const std::string& stem) {
  std::vector<double> re(g.amp.size()), im(g.amp.size());
  for (std::size_t k = 0; k < g.amp.size(); ++k) {
    re[k] = g.amp[k].real();
    im[k] = g.amp[k].imag();
  }
  const std::string name = fs::path(stem).filename().string();
  ordered_json j;
  j["format"] = "sfwm-jsa";
  j["real_csv"] = name + "_re.csv";
  j["imag_csv"] = name + "_im.csv";
  j["regime"] = to_string(g.regime);
  j["arbitrary_units"] = g.arbitrary_units;
  j["norm_scale"] = g.norm_scale;
  j["omega_s0_radfs"] = g.omega_s0;
  j["omega_i0_radfs"] = g.omega_i0;
  j["nu_s_radfs"] = axis_json(g.nu_s);
  j["nu_i_radfs"] = axis_json(g.nu_i);
  WrittenFiles w;
  write_atomic(stem + "_re.csv", matrix_csv(re, g.ns(), g.ni()));
  write_atomic(stem + "_im.csv", matrix_csv(im, g.ns(), g.ni()));
  write_atomic(stem + ".json", dump(j));
  w.paths = {stem + "_re.csv", stem + "_im.csv", stem + ".json"};
  return w;
}

JsaGrid import_jsa(const std::string& path) {
  const auto j = parse_json_file(path);
  if (j.value("format", "") != "sfwm-jsa") fail(ErrorKind::ParseError, path + ": not a JSA sidecar");
  JsaGrid g;
  try {
    g.regime = parse_regime(j.at("regime").get<std::string>());
    g.arbitrary_units = j.at("arbitrary_units").get<bool>();
    g.norm_scale = j.at("norm_scale").get<double>();
    g.omega_s0 = j.at("omega_s0_radfs").get<double>();
    g.omega_i0 = j.at("omega_i0_radfs").get<double>();
    g.nu_s = to_vector(j.at("nu_s_radfs"), "nu_s_radfs");
    g.nu_i = to_vector(j.at("nu_i_radfs"), "nu_i_radfs");
    const auto rp = sibling(path, j.at("real_csv").get<std::string>());
    const auto ip = sibling(path, j.at("imag_csv").get<std::string>());
    const auto re = flatten(read_csv_matrix(rp), g.ns(), g.ni(), rp);
    const auto im = flatten(read_csv_matrix(ip), g.ns(), g.ni(), ip);
    g.amp.resize(re.size());
    for (std::size_t k = 0; k < re.size(); ++k) g.amp[k] = {re[k], im[k]};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  return g;
}

WrittenFiles export_jsi(const JsiGrid& g, const std::string& stem) {
  ordered_json j;
  j["format"] = "sfwm-jsi";
  j["csv"] = fs::path(stem).filename().string() + ".csv";
  j["omega_s0_radfs"] = g.omega_s0;
  j["omega_i0_radfs"] = g.omega_i0;
  j["nu_s_radfs"] = axis_json(g.nu_s);
  j["nu_i_radfs"] = axis_json(g.nu_i);
  write_atomic(stem + ".csv", matrix_csv(g.w, g.ns(), g.ni()));
  write_atomic(stem + ".json", dump(j));
  return {{stem + ".csv", stem + ".json"}};
}

JsiGrid import_jsi(const std::string& path) {
  const auto j = parse_json_file(path);
  const auto format = j.value("format", "");
  if (format != "sfwm-jsi" && format != "sfwm-reconstruction")
    fail(ErrorKind::ParseError, path + ": not a JSI sidecar");
  JsiGrid g;
  try {
    g.omega_s0 = j.at("omega_s0_radfs").get<double>();
    g.omega_i0 = j.at("omega_i0_radfs").get<double>();
    g.nu_s = to_vector(j.at("nu_s_radfs"), "nu_s_radfs");
    g.nu_i = to_vector(j.at("nu_i_radfs"), "nu_i_radfs");
    const auto cp = sibling(path, j.at("csv").get<std::string>());
    g.w = flatten(read_csv_matrix(cp), g.ns(), g.ni(), cp);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  return g;
}

std::string contour_csv(const PhasematchContour& c) {
  std::string s = "omega_p_radfs,detuning_radfs,branch,loop_id\n";
  for (const auto& p : c.points)
    s += fmt(p.omega_p) + ',' + fmt(p.detuning) + ',' + to_string(p.branch) + ',' + std::to_string(p.loop_id) + '\n';
  return s;
}

WrittenFiles export_contour(const PhasematchContour& c, const std::string& path) {
  write_atomic(path, contour_csv(c));
  return {{path}};
}

PhasematchContour import_contour(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "omega_p_radfs,detuning_radfs,branch,loop_id")
    fail(ErrorKind::ParseError, path + ": unexpected contour header");
  PhasematchContour c;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    ContourPoint p;
    double loop = 0.0;
    if (f.size() != 4 || !parse_double(f[0], p.omega_p) || !parse_double(f[1], p.detuning) || !parse_double(f[3], loop))
      fail(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": bad contour row");
    if (f[2] == "inner") p.branch = Branch::Inner;
    else if (f[2] == "outer") p.branch = Branch::Outer;
    else if (f[2] == "line") p.branch = Branch::Line;
    else fail(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": unknown branch '" + f[2] + "'");
    p.loop_id = static_cast<int>(loop);
    c.points.push_back(p);
  }
  c.empty = c.points.empty();
  return c;
}

WrittenFiles export_candidates(const std::vector<DesignCandidate>& cs, const std::string& stem) {
  static const char* kColumns[][3] = {
      {"process", "string", ""},           {"omega_p1_radfs", "number", "rad/fs"},
      {"omega_p2_radfs", "number", "rad/fs"}, {"omega_s_radfs", "number", "rad/fs"},
      {"omega_i_radfs", "number", "rad/fs"},  {"sigma1_radfs", "number", "rad/fs"},
      {"sigma2_radfs", "number", "rad/fs"},   {"length_m", "number", "m"},
      {"scale", "number", ""},                {"T_s_fs", "number", "fs"},
      {"T_i_fs", "number", "fs"},             {"theta_deg", "number", "deg"},
      {"predicted_K", "number", ""},          {"delta_k_per_um", "number", "1/um"},
      {"factorable", "flag", ""},             {"symmetric", "flag", ""},
      {"bandwidth_residual", "number", ""},   {"raman", "flag", ""}};
  std::string s;
  ordered_json cols = ordered_json::array();
  for (std::size_t k = 0; k < std::size(kColumns); ++k) {
    s += (k ? "," : "") + std::string(kColumns[k][0]);
    cols.push_back({{"name", kColumns[k][0]}, {"type", kColumns[k][1]}, {"unit", kColumns[k][2]}});
  }
  s += '\n';
  for (const auto& c : cs) {
    s += c.process_label;
    for (double v : {c.omega_p1, c.omega_p2, c.omega_s, c.omega_i, c.sigma1, c.sigma2, c.length_m, c.scale,
                     c.T_s, c.T_i, c.theta_deg, c.predicted_K, c.delta_k})
      s += ',' + fmt(v);
    s += ',' + bool_col(c.factorable) + ',' + bool_col(c.symmetric) + ',' + fmt(c.eq8_residual) + ',' + bool_col(c.raman) + '\n';
  }
  ordered_json j;
  j["format"] = "sfwm-candidates";
  j["csv"] = fs::path(stem).filename().string() + ".csv";
  j["rows"] = cs.size();
  j["columns"] = cols;
  write_atomic(stem + ".csv", s);
  write_atomic(stem + ".json", dump(j));
  return {{stem + ".csv", stem + ".json"}};
}

WrittenFiles export_reconstruction(const Reconstruction& r, const std::string& stem) {
  WrittenFiles w = export_jsi(r.estimate, stem);
  ordered_json j = ordered_json::parse(read_file(stem + ".json"));
  j["format"] = "sfwm-reconstruction";
  auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  j["metrics"] = {{"l1", r.metrics.l1}, {"overlap", r.metrics.overlap}};
  j["settings"] = r.settings;
  j["dwell_s"] = r.dwell_s;
  j["acquisition_proxy_s"] = r.acquisition_proxy_s;
  j["detected_counts"] = r.detected_counts;
  j["snr"] = num(r.snr);
  j["noiseless"] = r.noiseless;
  j["resolution_warning"] = r.resolution_warning;
  j["sigma_d_radfs"] = num(r.sigma_d);
  j["sigma_a_radfs"] = num(r.sigma_a);
  j["r"] = num(r.r);
  j["implied_purity"] = num(r.implied_purity);
  if (!r.histogram.empty()) {
    const std::string hist = stem + "_histogram.csv";
    write_atomic(hist, matrix_csv(r.histogram, r.t_s_ps.size(), r.t_i_ps.size()));
    j["histogram_csv"] = fs::path(hist).filename().string();
    j["t_s_ps"] = axis_json(r.t_s_ps);
    j["t_i_ps"] = axis_json(r.t_i_ps);
    w.paths.push_back(hist);
  }
  write_atomic(stem + ".json", dump(j));
  return w;
}

std::string schmidt_json(const SchmidtReport& r) {
  ordered_json j;
  j["format"] = "sfwm-schmidt";
  j["K"] = r.K;
  j["purity"] = r.purity;
  j["g2"] = r.g2;
  j["hom_visibility"] = r.hom_visibility;
  j["truncation"] = kSchmidtTruncation;
  j["lambda"] = axis_json(r.lambda);
  return dump(j);
}

std::string negativity_json(const NegativityReport& r) {
  ordered_json j;
  j["format"] = "sfwm-negativity";
  j["ln_bits"] = r.ln;
  j["bins"] = r.bins;
  j["converged"] = r.converged;
  j["ln_doubled_bits"] = r.ln_doubled;
  return dump(j);
}

}  // namespace sfwm::io
