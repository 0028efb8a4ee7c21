#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "soilab/core_types.hpp"

namespace soilab {

/// "step", "smooth:W" (W in units of a); tabulated profiles are not expressible as a flag.
RadialProfile parse_profile(const std::string& text);

/// Human-editable key = value document (one pair per line, '#' comments).
/// Keys: particle, a, delta, k_core or V, profile.
std::string to_config(const WaveguideSpec& spec);
WaveguideSpec spec_from_config(const std::string& text);
std::map<std::string, std::string> parse_key_values(const std::string& text);

nlohmann::json to_json(const WaveguideSpec& spec);
WaveguideSpec spec_from_json(const nlohmann::json& j);

}  // namespace soilab
