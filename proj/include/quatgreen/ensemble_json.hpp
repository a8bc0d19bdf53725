#pragma once

#include <json.hpp>

#include "quatgreen/ensemble.hpp"

namespace quatgreen {

/**
 * Parses {"kind": "semicircle", "r": ...}, {"kind": "wishart", "c": ..., "r": ...},
 * {"kind": "two_atoms", "mu": ...} or
 * {"kind": "atoms", "atoms": [{"lambda": ..., "weight": ...}, ...]}.
 * Unknown fields and invalid parameters throw ConfigError.
 */
EnsembleSpec ensemble_from_json(const nlohmann::json& j);

nlohmann::json ensemble_to_json(const EnsembleSpec& ens);

}  // namespace quatgreen
