#pragma once

#include <string>

#include "betamix/process.hpp"

#include "json.hpp"

namespace betamix {

// JSON schemas:
//
//   ground space  {"dimension": d, "sites": [{"coord": [...], "weight": w}, ...]}
//                 weight optional, default 1.0
//   kernel        {"space": <ground space>, "matrix": [[...], ...]}
//   explicit law  {"space": <ground space>, "law": [{"config": [i, ...], "p": v}, ...]}
//                 configs omitted from the list have probability 0

GroundSpace ground_space_from_json(const nlohmann::json& j);
nlohmann::json ground_space_to_json(const GroundSpace& space);

DiscreteDPP dpp_from_json(const nlohmann::json& j);
nlohmann::json dpp_to_json(const DiscreteDPP& dpp);

FiniteProcess process_from_json(const nlohmann::json& j);
nlohmann::json process_to_json(const FiniteProcess& process);

/// Parse a file; wraps nlohmann parse errors in std::runtime_error with the
/// path in the message.
nlohmann::json load_json_file(const std::string& path);

}  // namespace betamix
