#pragma once

#include <string>

#include <json.hpp>

#include "cdqaoa/model.hpp"

namespace cdqaoa {

/// {"n": N, "boundary": "periodic"|"open", "couplings": [...], "seed": s}
/// Couplings are written in shortest round-trip decimal form, so reading the
/// object back reproduces every double bit for bit.
nlohmann::json to_json(const ChainSpec& spec);
ChainSpec chain_from_json(const nlohmann::json& j);

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

}  // namespace cdqaoa
