// JSON encodings of fields, forms, profiles and frames.
//
//   field:   {"dim": n, "terms": [[a, [m1, ...], theta], ...]}
//   form:    {"potential": field} or {"components": [field, ...]}
//   profile: {"tag": "constant", "scale": c} or
//            {"tag": "piecewise_linear", "scale": c, "breakpoints": [...], "values": [...]}
#pragma once

#include "json.hpp"

#include "lagtomo/density.hpp"
#include "lagtomo/torus.hpp"

namespace lagtomo {

using Json = nlohmann::json;

Json to_json(const PeriodicScalarField& f);
PeriodicScalarField field_from_json(const Json& j);

Json to_json(const OneForm& beta);
OneForm form_from_json(const Json& j);

Json to_json(const Profile& p);
Profile profile_from_json(const Json& j);

Json to_json(const Frame& fr);
Frame frame_from_json(const Json& j);

}  // namespace lagtomo
