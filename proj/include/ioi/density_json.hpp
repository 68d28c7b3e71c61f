#pragma once

#include <json.hpp>

#include "ioi/density.hpp"

namespace ioi {

/// {"form":"normal","mean":m,"variance":v}
/// {"form":"grid","lo":a,"hi":b,"weights":[...]}   (raw weights, bit-exact)
/// {"form":"mixture","components":[{"weight":w,"density":{...}}, ...]}
nlohmann::json density_to_json(const Density1D& d);

/// Inverse of density_to_json. Throws ValidationError on malformed input
/// and StructuralError when the decoded density is invalid.
Density1D density_from_json(const nlohmann::json& j);

}  // namespace ioi
