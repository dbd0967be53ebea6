// Experiment configuration. A config file is a JSON document with one table per
// experiment; anything missing takes the defaults below, unknown keys are errors.
//
//   {
//     "seed": 1, "threads": 0,
//     "tomograph": {"dim": 1, "R": 1.0, "breakpoints": [0.5, 1.0], "values": [1, 1],
//                   "k": 1, "normalization": 1.0},
//     "crofton": {...}, "homogenize": {...}, "volume_bound": {...},
//     "semicontinuity": {...}, "proof_trace": {...}, "barcode": {...}
//   }
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagtomo/io.hpp"
#include "lagtomo/tomograph.hpp"

namespace lagtomo {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct TomographConfig {
  int dim = 1;
  double outer_radius = 1.0;
  std::vector<double> breakpoints{0.5, 1.0};
  std::vector<double> values{1.0, 1.0};
  int k = 1;
  // A number, or absent with `normalize` set to rescale so that sigma(0) = 1.
  double normalization = 1.0;
  bool normalize = false;

  Tomograph build() const;
};

struct CroftonSuiteConfig {
  int radial = 200;
  int angular = 64;
  int y_points = 21;
  double y_max = 1.0;
  double tolerance = 1e-3;
  int product_points = 5;
  std::vector<int> k_values{2, 4, 8};
  double closed_form_tolerance = 1e-9;
  int sigma_sweep = 41;
  int max_at_zero_pairs = 10000;
};

struct HomogenizeConfig {
  OneForm form = OneForm::exact(PeriodicScalarField(1, {TrigTerm{0.6, {1, 0}, 0.0}}));
  std::vector<int> k_schedule{1, 2, 4, 8, 16};
  int radial = 200;
  int angular = 256;
  int limit_resolution = 1 << 16;
  double final_tolerance = 0.01;
};

struct VolumeBoundConfig {
  TomographConfig tomograph{1, 0.2, {0.08, 0.18}, {1.0, 1.0}, 1, 1.0, true};
  double v = 0.2;     // V = {|y_i| < v}
  double eta = 0.1;
  int k_max = 32;
  int forms = 10;     // random exact forms
  double max_height = 0.18;
  int terms = 3;
  int max_frequency = 3;
  std::vector<OneForm> extra_forms;  // evaluated after the random ones
  double zero_tolerance = 1e-3;
  int volume_resolution = 4096;
  int radial = 200;
  int angular = 128;
};

struct SemicontinuityConfig {
  std::optional<PeriodicScalarField> base;  // defaults to zero in the tomograph dimension
  std::vector<double> t_schedule{0.2, 0.1, 0.05, 0.02};
  double u = 1.0;  // U = {|y_i| < u}
  bool control = true;
  int nodes_per_period = 256;
  int radial = 200;
  int angular = 64;
  double final_fraction = 0.01;
  double volume_growth = 3.0;
};

struct ProofTraceConfig {
  std::optional<PeriodicScalarField> base;
  int radial = 40;
  int angular = 32;
  int barcode_resolution = 512;
  double epsilon = 0.05;
  double delta = 0.2;
  int perturbations = 10;
  int terms = 4;
  int max_frequency = 4;
  double strict_jacobian_tol = 1e-4;
  double stability_tolerance = 0.05;
  double max_degenerate_fraction = 0.01;
};

struct BarcodeConfig {
  PeriodicScalarField field = PeriodicScalarField(1, {TrigTerm{1.0, {2, 0}, 0.0}});
  int resolution = 2048;
  int sweep = 50;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  bool deterministic = false;
  bool trace = false;
  TomographConfig tomograph;
  CroftonSuiteConfig crofton;
  HomogenizeConfig homogenize;
  VolumeBoundConfig volume_bound;
  SemicontinuityConfig semicontinuity;
  ProofTraceConfig proof_trace;
  BarcodeConfig barcode;

  /// Worker count after applying --deterministic.
  int worker_threads() const { return deterministic ? 1 : threads; }
};

ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

TomographConfig tomograph_config_from_json(const Json& j, const TomographConfig& defaults = {});
Json to_json(const TomographConfig& t);

}  // namespace lagtomo
