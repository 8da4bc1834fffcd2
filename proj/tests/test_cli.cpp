#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "sfwm/cli.hpp"
#include "sfwm/export.hpp"
#include "sfwm/io.hpp"

using namespace sfwm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
  json summary() const { return json::parse(out); }
};

Result sfwm_run(std::vector<std::string> args) {
  args.insert(args.begin(), "sfwm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json base_config() {
  return json::parse(R"({
    "fiber": {"kind": "taylor", "length_m": 0.1,
              "taylor_modes": [{"mode": "HE11x", "omega_ref_rad_per_fs": 2.4,
                                "beta_fsn_per_um": [11.69, 4.9, -0.001, 0.0, 0.05]}]},
    "pumps": [{"omega_rad_per_fs": 2.4, "sigma_rad_per_fs": 0.01}],
    "processes": [{"row": 1}],
    "seed": 7,
    "jsa": {"regime": "full", "samples": 32, "detuning_min_rad_per_fs": 0.01, "detuning_max_rad_per_fs": 0.8},
    "charsim": {"method": "monochromator", "steps_s": 8, "steps_i": 8, "pair_budget": 2000,
                "detector": {"efficiency": 0.5, "dark_rate_hz": 100}}
  })");
}

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& tag) {
    dir = fs::temp_directory_path() / ("sfwm_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string config(const json& j, const std::string& name = "run.json") const {
    const auto p = (dir / name).string();
    io::write_atomic(p, j.dump(2));
    return p;
  }
  std::string out(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("validate accepts a good config and writes nothing") {
  Workspace ws("validate");
  const auto cfg = ws.config(base_config());
  const auto r = sfwm_run({"validate", "--config", cfg, "--out", ws.out("o")});
  CHECK(r.code == kExitOk);
  CHECK(r.summary()["status"] == "ok");
  CHECK_FALSE(fs::exists(ws.out("o")));
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
}

TEST_CASE("unknown keys exit 2 and name the JSON path") {
  Workspace ws("unknown");
  for (auto [mutate, path] : std::vector<std::pair<std::function<void(json&)>, std::string>>{
           {[](json& j) { j["fiber"]["radius"] = 1.0; }, "$.fiber.radius"},
           {[](json& j) { j["processes"][0]["pump1"] = json{{"mode", "HE11x"}, {"dir", "+"}}; }, "$.processes[0].pump1.dir"},
           {[](json& j) { j["jsa"]["sigma"] = 0.1; }, "$.jsa.sigma"},
           {[](json& j) { j["extra"] = true; }, "$.extra"},
           {[](json& j) { j["charsim"]["seed_photons"] = 5; }, "$.charsim.seed_photons"}}) {
    json j = base_config();
    mutate(j);
    const auto r = sfwm_run({"validate", "--config", ws.config(j)});
    CHECK(r.code == kExitConfig);
    CHECK_MESSAGE(r.err.find(path) != std::string::npos, r.err);
    CHECK(r.summary()["status"] == "error");
  }
}

TEST_CASE("type and range errors are config errors") {
  Workspace ws("types");
  json a = base_config();
  a["fiber"]["length_m"] = "long";
  CHECK(sfwm_run({"validate", "--config", ws.config(a)}).code == kExitConfig);
  json b = base_config();
  b["pumps"][0]["sigma_rad_per_fs"] = -1;
  const auto rb = sfwm_run({"validate", "--config", ws.config(b)});
  CHECK(rb.code == kExitConfig);
  CHECK(rb.err.find("$.pumps[0].sigma_rad_per_fs") != std::string::npos);
  json c = base_config();
  c["jsa"]["process"] = "row9";
  CHECK(sfwm_run({"validate", "--config", ws.config(c)}).code == kExitConfig);
  CHECK(sfwm_run({"validate", "--config", ws.out("missing.json")}).code == kExitConfig);
  io::write_atomic(ws.out("broken.json"), "{");
  CHECK(sfwm_run({"validate", "--config", ws.out("broken.json")}).code == kExitConfig);
}

TEST_CASE("command-line misuse exits 2") {
  CHECK(sfwm_run({}).code == kExitConfig);
  CHECK(sfwm_run({"frobnicate", "--config", "x.json"}).code == kExitConfig);
  CHECK(sfwm_run({"jsa"}).code == kExitConfig);
  CHECK(sfwm_run({"jsa", "--config", "x.json", "--seed", "abc"}).code == kExitConfig);
}

TEST_CASE("a subcommand without its section exits 2") {
  Workspace ws("section");
  const auto r = sfwm_run({"design", "--config", ws.config(base_config()), "--out", ws.out("o")});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("$.design") != std::string::npos);
}

TEST_CASE("exit codes by error kind") {
  CHECK(exit_code_for(ErrorKind::ConfigError) == kExitConfig);
  CHECK(exit_code_for(ErrorKind::QuadratureNonConvergence) == kExitNumeric);
  CHECK(exit_code_for(ErrorKind::NotConverged) == kExitNumeric);
  CHECK(exit_code_for(ErrorKind::FaddeevaOverflow) == kExitNumeric);
  CHECK(exit_code_for(ErrorKind::IoError) == kExitFailure);
  CHECK(exit_code_for(ErrorKind::NotPhasematched) == kExitFailure);
}

TEST_CASE("jsa then schmidt reproduces the in-process pipeline") {
  Workspace ws("pipeline");
  json j = base_config();
  const auto cfg = ws.config(j);
  const auto r1 = sfwm_run({"jsa", "--config", cfg, "--out", ws.out("o")});
  REQUIRE(r1.code == kExitOk);
  j["schmidt"] = {{"input", "o/jsa.json"}};
  const auto r2 = sfwm_run({"schmidt", "--config", ws.config(j, "schmidt.json"), "--out", ws.out("o")});
  REQUIRE(r2.code == kExitOk);
  const double k_file = r2.summary()["K"].get<double>();

  const auto rc = parse_config(base_config().dump());
  const double k_mem = schmidt_decompose(compute_jsa(rc, rc.process(""), *rc.jsa)).K;
  CHECK(std::abs(k_file - k_mem) <= 1e-12 * k_mem);
  const auto sidecar = json::parse(io::read_file(ws.out("o/schmidt.json")));
  CHECK(sidecar["K"].get<double>() == k_file);
}

TEST_CASE("same config and seed give byte-identical outputs") {
  Workspace ws("determinism");
  const auto cfg = ws.config(base_config());
  const auto a = sfwm_run({"charsim", "--config", cfg, "--out", ws.out("a")});
  const auto b = sfwm_run({"charsim", "--config", cfg, "--out", ws.out("b")});
  const auto c = sfwm_run({"charsim", "--config", cfg, "--out", ws.out("c"), "--seed", "8"});
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  REQUIRE(c.code == kExitOk);
  for (const char* f : {"reconstruction.csv", "reconstruction.json"}) {
    CHECK(io::read_file(ws.out(std::string("a/") + f)) == io::read_file(ws.out(std::string("b/") + f)));
  }
  CHECK(io::read_file(ws.out("a/reconstruction.csv")) != io::read_file(ws.out("c/reconstruction.csv")));
  CHECK(a.summary()["overlap"] == b.summary()["overlap"]);
}

TEST_CASE("output_dir resolves next to the config and --out overrides it") {
  Workspace ws("outdir");
  json j = base_config();
  j["output_dir"] = "results";
  const auto cfg = ws.config(j);
  REQUIRE(sfwm_run({"jsa", "--config", cfg}).code == kExitOk);
  CHECK(fs::exists(ws.out("results/jsa.json")));
  REQUIRE(sfwm_run({"jsa", "--config", cfg, "--out", ws.out("other")}).code == kExitOk);
  CHECK(fs::exists(ws.out("other/jsa_re.csv")));
}

TEST_CASE("no phasematching solution is reported, not thrown past main") {
  Workspace ws("nopm");
  json j = base_config();
  j["jsa"]["detuning_min_rad_per_fs"] = 0.7;
  j["jsa"]["detuning_max_rad_per_fs"] = 0.8;
  const auto r = sfwm_run({"jsa", "--config", ws.config(j), "--out", ws.out("o")});
  CHECK(r.code == kExitFailure);
  CHECK(r.summary()["kind"] == "NotPhasematched");
  CHECK_FALSE(fs::exists(ws.out("o/jsa.json")));
}

TEST_CASE("quiet suppresses notes but not errors") {
  Workspace ws("quiet");
  json j = base_config();
  j["contour"] = {{"pump_min_rad_per_fs", 3.0}, {"pump_max_rad_per_fs", 3.1}, {"pump_samples", 64},
                  {"detuning_min_rad_per_fs", 0.001}, {"detuning_max_rad_per_fs", 0.002}, {"detuning_samples", 64}};
  const auto cfg = ws.config(j);
  const auto loud = sfwm_run({"contour", "--config", cfg, "--out", ws.out("o")});
  const auto quiet = sfwm_run({"contour", "--config", cfg, "--out", ws.out("o"), "--quiet"});
  CHECK(loud.code == kExitOk);
  CHECK_FALSE(loud.err.empty());
  CHECK(quiet.err.empty());
}
