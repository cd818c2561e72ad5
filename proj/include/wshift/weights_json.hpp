#pragma once

#include <filesystem>

#include <json.hpp>

#include "wshift/weights.hpp"

namespace wshift {

// Weight files:
//   {"kind":"power","n":2,"m":2}
//   {"kind":"radial","m":2,"a":{"generator":"geometric","r":"3/2"}}
//   {"kind":"radial","m":2,"a":{"generator":"power","n":2}}
//   {"kind":"radial","m":2,"a":{"generator":"polynomial","coefficients":["2","1"]}}
//   {"kind":"radial","m":2,"a":{"list":["1","2","9/2"]}}
//   {"kind":"table","m":2,"entries":[{"alpha":[1,0],"rho":"3/2"}],"fallback":"power:2"}
//   {"kind":"perturbed45","n":2,"m":2,"L":2}
// Rationals are "p/q" strings; plain integers are accepted where a rational is expected.
// A table fallback is either "power:<n>" or an embedded power/radial object without "m".

WeightFunction weight_from_json(const nlohmann::json& spec);
nlohmann::ordered_json weight_to_json(const WeightFunction& weight);

/// Reads and parses a weight file; errors carry the path.
WeightFunction load_weight_file(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const MultiIndex& alpha);
MultiIndex multi_index_from_json(const nlohmann::json& value);

}  // namespace wshift
