#include "lagtomo/io.hpp"

#include <stdexcept>

namespace lagtomo {

Json to_json(const PeriodicScalarField& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json wave = Json::array();
    for (int i = 0; i < f.dim(); ++i) wave.push_back(t.wave[static_cast<std::size_t>(i)]);
    terms.push_back(Json::array({t.amplitude, wave, t.phase}));
  }
  return Json{{"dim", f.dim()}, {"terms", terms}};
}

PeriodicScalarField field_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  require_dim(dim);
  std::vector<TrigTerm> terms;
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 3) {
      throw std::invalid_argument("field term must be [amplitude, [wave...], phase]");
    }
    TrigTerm term;
    term.amplitude = t[0].get<double>();
    const auto& wave = t[1];
    if (!wave.is_array() || static_cast<int>(wave.size()) != dim) {
      throw std::invalid_argument("field term wave vector has wrong length");
    }
    for (int i = 0; i < dim; ++i) term.wave[static_cast<std::size_t>(i)] = wave[static_cast<std::size_t>(i)].get<int>();
    term.phase = t[2].get<double>();
    terms.push_back(term);
  }
  return PeriodicScalarField(dim, std::move(terms));
}

Json to_json(const OneForm& beta) {
  if (beta.potential()) return Json{{"potential", to_json(*beta.potential())}};
  Json comps = Json::array();
  for (const auto& c : beta.components()) comps.push_back(to_json(c));
  return Json{{"components", comps}};
}

OneForm form_from_json(const Json& j) {
  if (j.contains("potential")) {
    // Components may be given as well; the potential wins, but they must agree.
    OneForm beta = OneForm::exact(field_from_json(j.at("potential")));
    if (j.contains("components")) {
      std::vector<PeriodicScalarField> comps;
      for (const auto& c : j.at("components")) comps.push_back(field_from_json(c));
      OneForm check(std::move(comps), *beta.potential());
      if (check.potential_discrepancy(64) > 1e-12) {
        throw std::invalid_argument("form components disagree with the potential");
      }
    }
    return beta;
  }
  std::vector<PeriodicScalarField> comps;
  for (const auto& c : j.at("components")) comps.push_back(field_from_json(c));
  return OneForm(std::move(comps));
}

Json to_json(const Profile& p) {
  Json j{{"tag", p.tag()}, {"scale", p.scale()}};
  if (p.kind() == Profile::Kind::PiecewiseLinear) {
    j["breakpoints"] = p.breakpoints();
    j["values"] = p.values();
  }
  if (p.kind() == Profile::Kind::Custom) {
    throw std::invalid_argument("custom profiles have no serial form");
  }
  return j;
}

Profile profile_from_json(const Json& j) {
  const std::string tag = j.value("tag", std::string("piecewise_linear"));
  const double scale = j.value("scale", 1.0);
  if (tag == "constant") return Profile::constant(scale);
  if (tag == "piecewise_linear") {
    return Profile::piecewise_linear(j.at("breakpoints").get<std::vector<double>>(),
                                     j.at("values").get<std::vector<double>>())
        .scaled(scale);
  }
  throw std::invalid_argument("unknown profile tag: " + tag);
}

Json to_json(const Frame& fr) { return Json{{"dim", fr.dim()}, {"data", fr.to_array()}}; }

Frame frame_from_json(const Json& j) {
  const auto data = j.at("data").get<std::vector<double>>();
  return Frame::from_array(j.at("dim").get<int>(), data);
}

}  // namespace lagtomo
