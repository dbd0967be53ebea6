#include "lagtomo/cli.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "lagtomo/experiments.hpp"

namespace lagtomo {

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

// Everything except the two foundational experiments needs them green first.
bool gated(const std::string& name) { return name != "crofton" && name != "proof-trace"; }

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"crofton", "homogenize", "volume-bound",
                                              "semicontinuity", "proof-trace", "barcode"};
  return names;
}

Report run_experiment(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "crofton") return run_crofton_suite(cfg);
  if (name == "homogenize") return run_homogenization(cfg);
  if (name == "volume-bound") return run_volume_bound(cfg);
  if (name == "semicontinuity") return run_semicontinuity(cfg);
  if (name == "proof-trace") return run_theorem_proof_trace(cfg);
  if (name == "barcode") return run_barcode(cfg);
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

int exit_code(const Report& r) {
  if (r.status() == "DEGENERATE") return kExitDegenerate;
  return r.pass() ? kExitPass : kExitFail;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"lagtomo: Lagrangian tomograph experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "lagtomo_out";
  std::uint64_t seed = 0;
  bool deterministic = false;
  bool trace = false;
  int threads = -1;
  bool skip_gate = false;

  for (const auto& name : experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_flag("--deterministic", deterministic, "single worker, bit-identical output");
    sub->add_flag("--trace", trace, "write per-sample traces");
    sub->add_option("--threads", threads, "worker threads, 0 = all cores");
    sub->add_flag("--skip-prerequisites", skip_gate, "do not re-run the crofton and proof-trace gate");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  CLI::App* sub = app.get_subcommands().front();

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (sub->count("--seed") > 0) cfg.seed = seed;
  if (deterministic) cfg.deterministic = true;
  if (trace) cfg.trace = true;
  if (threads >= 0) cfg.threads = threads;

  if (gated(name) && !skip_gate) {
    const PrerequisiteResult pre = check_prerequisites(cfg.worker_threads());
    if (!pre.pass) {
      err << name << ": prerequisites failed\n";
      for (const auto& f : pre.failures) err << "  " << f << '\n';
      return kExitFail;
    }
  }

  Report rep("", {});
  try {
    rep = run_experiment(name, cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << name << ": invalid input: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / (name + ".csv"), rep.csv());
    write_file(dir / (name + "_summary.json"), rep.summary().dump(2) + "\n");
    for (const auto& a : rep.attachments()) write_file(dir / a.filename, a.content);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitUsage;
  }
  out << rep.summary().dump() << '\n';
  for (const auto& f : rep.failures()) err << "FAIL: " << f << '\n';
  return exit_code(rep);
}

}  // namespace lagtomo
