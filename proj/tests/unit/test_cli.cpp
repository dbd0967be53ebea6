#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lagtomo/cli.hpp"

using namespace lagtomo;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lagtomo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path config(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("every experiment name dispatches") {
  CHECK(experiment_names().size() == 6);
  CHECK_THROWS_AS(run_experiment("nope", ExperimentConfig{}), std::invalid_argument);
}

TEST_CASE("barcode subcommand writes CSV, summary and attachments") {
  const auto dir = temp_dir("lagtomo_cli_barcode");
  const Run r = cli({"barcode", "--out", dir.string(), "--skip-prerequisites"});
  CHECK(r.code == kExitPass);
  CHECK(fs::exists(dir / "barcode.csv"));
  CHECK(fs::exists(dir / "barcode_summary.json"));
  CHECK(slurp(dir / "barcode.csv").rfind("length,is_infinite\n", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "barcode_summary.json"));
  CHECK(summary["experiment"] == "barcode");
  CHECK(summary["pass"] == true);
  CHECK(summary.contains("rows"));
  CHECK(summary.contains("worst_margin"));
  CHECK(nlohmann::json::parse(r.out)["pass"] == true);
}

TEST_CASE("usage and config errors exit with 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"barcode", "--frobnicate"}).code == kExitUsage);
  CHECK(cli({"teleport"}).code == kExitUsage);
  CHECK(cli({"barcode", "--config", "/nonexistent/x.json"}).code == kExitUsage);
  const auto bad = config("lagtomo_cli_bad.json", R"({"barcode": {"resolution": 3}})");
  const Run r = cli({"barcode", "--config", bad.string(), "--skip-prerequisites", "--out",
                     temp_dir("lagtomo_cli_bad").string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("config error") != std::string::npos);
}

TEST_CASE("a degenerate barcode exits with 3") {
  const auto cfg = config("lagtomo_cli_flat.json", R"({"barcode": {"field": {"dim": 1, "terms": []}}})");
  const Run r = cli({"barcode", "--config", cfg.string(), "--skip-prerequisites", "--out",
                     temp_dir("lagtomo_cli_flat").string()});
  CHECK(r.code == kExitDegenerate);
  CHECK(nlohmann::json::parse(r.out)["status"] == "DEGENERATE");
}

TEST_CASE("a failed assertion exits with 1") {
  const auto cfg = config("lagtomo_cli_strict.json", R"({"homogenize": {"k_schedule": [1, 2], "final_tolerance": 1e-9}})");
  const Run r = cli({"homogenize", "--config", cfg.string(), "--skip-prerequisites", "--out",
                     temp_dir("lagtomo_cli_strict").string()});
  CHECK(r.code == kExitFail);
  CHECK(r.err.find("FAIL") != std::string::npos);
}

TEST_CASE("deterministic runs are bit-identical") {
  const auto a = temp_dir("lagtomo_det_a");
  const auto b = temp_dir("lagtomo_det_b");
  const auto c = temp_dir("lagtomo_det_c");
  const auto cfg = config("lagtomo_det.json", R"({"volume_bound": {"forms": 3, "k_max": 4}})");
  CHECK(cli({"volume-bound", "--config", cfg.string(), "--deterministic", "--seed", "5", "--skip-prerequisites",
             "--out", a.string()}).code == kExitPass);
  CHECK(cli({"volume-bound", "--config", cfg.string(), "--deterministic", "--seed", "5", "--skip-prerequisites",
             "--out", b.string()}).code == kExitPass);
  CHECK(cli({"volume-bound", "--config", cfg.string(), "--threads", "3", "--seed", "5", "--skip-prerequisites",
             "--out", c.string()}).code == kExitPass);
  const std::string csv = slurp(a / "volume-bound.csv");
  CHECK(!csv.empty());
  CHECK(csv == slurp(b / "volume-bound.csv"));
  CHECK(csv == slurp(c / "volume-bound.csv"));
  const auto d = temp_dir("lagtomo_det_d");
  cli({"volume-bound", "--config", cfg.string(), "--deterministic", "--seed", "6", "--skip-prerequisites", "--out",
       d.string()});
  CHECK(csv != slurp(d / "volume-bound.csv"));
}

TEST_CASE("trace flag writes per-sample traces") {
  const auto dir = temp_dir("lagtomo_trace");
  const auto cfg = config("lagtomo_trace.json", R"({"homogenize": {"k_schedule": [1, 2], "angular": 32}})");
  const Run r = cli({"homogenize", "--config", cfg.string(), "--trace", "--skip-prerequisites", "--out", dir.string()});
  CHECK(r.code == kExitPass);
  CHECK(fs::exists(dir / "homogenize_trace_k1.csv"));
  CHECK(slurp(dir / "homogenize_trace_k2.csv").rfind("factor,rho1,phi1,rho_hi,count,weight\n", 0) == 0);
}

TEST_CASE("gated experiments run the prerequisites first") {
  const auto dir = temp_dir("lagtomo_gate");
  const Run r = cli({"barcode", "--out", dir.string()});
  CHECK(r.code == kExitPass);
  CHECK(fs::exists(dir / "barcode.csv"));
}
