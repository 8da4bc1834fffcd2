#pragma once

#include <string>
#include <vector>

#include "sfwm/charsim.hpp"
#include "sfwm/contour.hpp"
#include "sfwm/design.hpp"
#include "sfwm/jsa.hpp"
#include "sfwm/quantum.hpp"

// File formats. Every writer goes through io::write_atomic; floats use 17 significant digits.
namespace sfwm::io {

struct WrittenFiles {
  std::vector<std::string> paths;
};

// <stem>_re.csv, <stem>_im.csv, <stem>.json
WrittenFiles export_jsa(const JsaGrid& grid, const std::string& stem);
JsaGrid import_jsa(const std::string& sidecar_path);

// <stem>.csv, <stem>.json
WrittenFiles export_jsi(const JsiGrid& grid, const std::string& stem);
JsiGrid import_jsi(const std::string& sidecar_path);

// omega_p_radfs,detuning_radfs,branch,loop_id
std::string contour_csv(const PhasematchContour& contour);
WrittenFiles export_contour(const PhasematchContour& contour, const std::string& path);
PhasematchContour import_contour(const std::string& path);

// <stem>.csv plus <stem>.json describing the columns
WrittenFiles export_candidates(const std::vector<DesignCandidate>& candidates, const std::string& stem);

// <stem>.csv grid, <stem>.json metrics, <stem>_histogram.csv when present
WrittenFiles export_reconstruction(const Reconstruction& rec, const std::string& stem);

std::string schmidt_json(const SchmidtReport& r);
std::string negativity_json(const NegativityReport& r);

std::string matrix_csv(const std::vector<double>& values, std::size_t rows, std::size_t cols);

}  // namespace sfwm::io
