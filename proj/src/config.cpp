#include "lagtomo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace lagtomo {

namespace {

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected a table");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void positive(int v, const std::string& what) {
  if (v < 1) throw ConfigError(what + " must be >= 1");
}

std::vector<OneForm> forms_from_json(const Json& j) {
  std::vector<OneForm> out;
  for (const auto& f : j) out.push_back(form_from_json(f));
  return out;
}

}  // namespace

Tomograph TomographConfig::build() const {
  Tomograph t(dim, RadialMeasure(outer_radius, breakpoints, values), k, 1.0);
  if (normalize) return t.normalized();
  return Tomograph(dim, t.measure(), k, normalization);
}

TomographConfig tomograph_config_from_json(const Json& j, const TomographConfig& defaults) {
  check_keys(j, "tomograph", {"dim", "R", "r0", "r1", "value", "breakpoints", "values", "k",
                              "normalization"});
  TomographConfig t = defaults;
  read(j, "dim", t.dim);
  read(j, "R", t.outer_radius);
  read(j, "k", t.k);
  if (j.contains("breakpoints") || j.contains("values")) {
    t.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    t.values = j.at("values").get<std::vector<double>>();
  }
  if (j.contains("r0") || j.contains("r1")) {
    const double value = j.value("value", 1.0);
    t.breakpoints = {j.at("r0").get<double>(), j.at("r1").get<double>()};
    t.values = {value, value};
  }
  if (j.contains("normalization")) {
    const auto& n = j.at("normalization");
    if (n.is_string()) {
      if (n.get<std::string>() != "auto") throw ConfigError("normalization must be a number or \"auto\"");
      t.normalize = true;
    } else {
      t.normalize = false;
      t.normalization = n.get<double>();
    }
  }
  try {
    (void)t.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("tomograph: ") + e.what());
  }
  return t;
}

Json to_json(const TomographConfig& t) {
  Json j{{"dim", t.dim}, {"R", t.outer_radius}, {"breakpoints", t.breakpoints},
         {"values", t.values}, {"k", t.k}};
  if (t.normalize) {
    j["normalization"] = "auto";
  } else {
    j["normalization"] = t.normalization;
  }
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  try {
    check_keys(j, "config", {"seed", "threads", "deterministic", "trace", "tomograph", "crofton",
                             "homogenize", "volume_bound", "semicontinuity", "proof_trace",
                             "barcode", "experiment"});
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    read(j, "deterministic", c.deterministic);
    read(j, "trace", c.trace);
    if (j.contains("tomograph")) c.tomograph = tomograph_config_from_json(j.at("tomograph"));
    const int dim = c.tomograph.dim;

    if (j.contains("crofton")) {
      const auto& s = j.at("crofton");
      check_keys(s, "crofton", {"radial", "angular", "y_points", "y_max", "tolerance",
                                "product_points", "k_values", "closed_form_tolerance",
                                "sigma_sweep", "max_at_zero_pairs"});
      auto& d = c.crofton;
      read(s, "radial", d.radial);
      read(s, "angular", d.angular);
      read(s, "y_points", d.y_points);
      read(s, "y_max", d.y_max);
      read(s, "tolerance", d.tolerance);
      read(s, "product_points", d.product_points);
      read(s, "k_values", d.k_values);
      read(s, "closed_form_tolerance", d.closed_form_tolerance);
      read(s, "sigma_sweep", d.sigma_sweep);
      read(s, "max_at_zero_pairs", d.max_at_zero_pairs);
      positive(d.radial, "crofton.radial");
      positive(d.angular, "crofton.angular");
      if (d.y_points < 2) throw ConfigError("crofton.y_points must be >= 2");
    }

    if (j.contains("homogenize")) {
      const auto& s = j.at("homogenize");
      check_keys(s, "homogenize", {"form", "k_schedule", "radial", "angular", "limit_resolution",
                                   "final_tolerance"});
      auto& d = c.homogenize;
      if (s.contains("form")) d.form = form_from_json(s.at("form"));
      read(s, "k_schedule", d.k_schedule);
      read(s, "radial", d.radial);
      read(s, "angular", d.angular);
      read(s, "limit_resolution", d.limit_resolution);
      read(s, "final_tolerance", d.final_tolerance);
      if (d.k_schedule.empty()) throw ConfigError("homogenize.k_schedule is empty");
      for (int k : d.k_schedule) positive(k, "homogenize.k_schedule entry");
    }
    const bool form_given = j.contains("homogenize") && j.at("homogenize").contains("form");
    if (c.homogenize.form.dim() != dim && !form_given) {
      // Default form lives in n = 1; lift it to the configured dimension.
      c.homogenize.form = OneForm::exact(
          PeriodicScalarField(dim, {TrigTerm{0.6, {1, 0}, 0.0}}));
    }

    if (j.contains("volume_bound")) {
      const auto& s = j.at("volume_bound");
      check_keys(s, "volume_bound", {"tomograph", "v", "eta", "k_max", "forms", "max_height",
                                     "terms", "max_frequency", "extra_forms", "zero_tolerance",
                                     "volume_resolution", "radial", "angular"});
      auto& d = c.volume_bound;
      if (s.contains("tomograph")) d.tomograph = tomograph_config_from_json(s.at("tomograph"), d.tomograph);
      read(s, "v", d.v);
      read(s, "eta", d.eta);
      read(s, "k_max", d.k_max);
      read(s, "forms", d.forms);
      read(s, "max_height", d.max_height);
      read(s, "terms", d.terms);
      read(s, "max_frequency", d.max_frequency);
      if (s.contains("extra_forms")) d.extra_forms = forms_from_json(s.at("extra_forms"));
      read(s, "zero_tolerance", d.zero_tolerance);
      read(s, "volume_resolution", d.volume_resolution);
      read(s, "radial", d.radial);
      read(s, "angular", d.angular);
      positive(d.k_max, "volume_bound.k_max");
    }

    if (j.contains("semicontinuity")) {
      const auto& s = j.at("semicontinuity");
      check_keys(s, "semicontinuity", {"base", "t_schedule", "u", "control", "nodes_per_period",
                                       "radial", "angular", "final_fraction", "volume_growth"});
      auto& d = c.semicontinuity;
      if (s.contains("base")) d.base = field_from_json(s.at("base"));
      read(s, "t_schedule", d.t_schedule);
      read(s, "u", d.u);
      read(s, "control", d.control);
      read(s, "nodes_per_period", d.nodes_per_period);
      read(s, "radial", d.radial);
      read(s, "angular", d.angular);
      read(s, "final_fraction", d.final_fraction);
      read(s, "volume_growth", d.volume_growth);
      if (d.t_schedule.empty()) throw ConfigError("semicontinuity.t_schedule is empty");
      for (double t : d.t_schedule) {
        if (!(t > 0.0)) throw ConfigError("semicontinuity.t_schedule entries must be positive");
      }
    }

    if (j.contains("proof_trace")) {
      const auto& s = j.at("proof_trace");
      check_keys(s, "proof_trace", {"base", "radial", "angular", "barcode_resolution", "epsilon",
                                    "delta", "perturbations", "terms", "max_frequency",
                                    "strict_jacobian_tol", "stability_tolerance",
                                    "max_degenerate_fraction"});
      auto& d = c.proof_trace;
      if (s.contains("base")) d.base = field_from_json(s.at("base"));
      read(s, "radial", d.radial);
      read(s, "angular", d.angular);
      read(s, "barcode_resolution", d.barcode_resolution);
      read(s, "epsilon", d.epsilon);
      read(s, "delta", d.delta);
      read(s, "perturbations", d.perturbations);
      read(s, "terms", d.terms);
      read(s, "max_frequency", d.max_frequency);
      read(s, "strict_jacobian_tol", d.strict_jacobian_tol);
      read(s, "stability_tolerance", d.stability_tolerance);
      read(s, "max_degenerate_fraction", d.max_degenerate_fraction);
      if (!(d.epsilon > 0.0) || !(d.delta > 0.0)) throw ConfigError("proof_trace: epsilon and delta must be positive");
    }

    if (j.contains("barcode")) {
      const auto& s = j.at("barcode");
      check_keys(s, "barcode", {"field", "resolution", "sweep"});
      auto& d = c.barcode;
      if (s.contains("field")) d.field = field_from_json(s.at("field"));
      read(s, "resolution", d.resolution);
      read(s, "sweep", d.sweep);
      if (d.resolution < 64) throw ConfigError("barcode.resolution must be >= 64");
    }

    for (const auto* f : {&c.semicontinuity.base, &c.proof_trace.base}) {
      if (*f && (*f)->dim() != dim) throw ConfigError("base field dimension differs from the tomograph");
    }
    if (c.homogenize.form.dim() != dim) throw ConfigError("homogenize.form dimension differs from the tomograph");
  } catch (const ConfigError&) {
    throw;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace lagtomo
