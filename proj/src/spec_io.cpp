#include "soilab/spec_io.hpp"

#include <cmath>
#include <sstream>

namespace soilab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n\"");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) throw Error(ErrorCode::InvalidArgument, "bad number for '" + key + "': " + value);
  return v;
}

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

RadialProfile parse_profile(const std::string& text) {
  if (text == "step") return RadialProfile::step();
  const std::string prefix = "smooth:";
  if (text.rfind(prefix, 0) == 0) return RadialProfile::smoothed_step(parse_double("profile", text.substr(prefix.size())));
  throw Error(ErrorCode::InvalidArgument, "profile must be 'step' or 'smooth:W', got '" + text + "'");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + " is not key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::string to_config(const WaveguideSpec& spec) {
  std::ostringstream os;
  os << "particle = " << to_string(spec.particle.kind()) << "\n"
     << "a = " << fmt17(spec.a) << "\n"
     << "delta = " << fmt17(spec.delta) << "\n"
     << "k_core = " << fmt17(spec.k_core) << "\n"
     << "profile = " << spec.profile.describe() << "\n";
  return os.str();
}

WaveguideSpec spec_from_config(const std::string& text) {
  const auto kv = parse_key_values(text);
  WaveguideSpec spec;
  if (auto it = kv.find("particle"); it != kv.end()) spec.particle = ParticleKind(parse_particle(it->second));
  if (auto it = kv.find("a"); it != kv.end()) spec.a = parse_double("a", it->second);
  if (auto it = kv.find("delta"); it != kv.end()) spec.delta = parse_double("delta", it->second);
  if (auto it = kv.find("profile"); it != kv.end()) spec.profile = parse_profile(it->second);
  const bool has_k = kv.count("k_core") > 0;
  const bool has_v = kv.count("V") > 0;
  if (has_k && has_v) throw Error(ErrorCode::InvalidArgument, "give either k_core or V, not both");
  if (has_k) spec.k_core = parse_double("k_core", kv.at("k_core"));
  if (has_v) spec.k_core = parse_double("V", kv.at("V")) / (spec.a * std::sqrt(spec.delta));
  return spec;
}

nlohmann::json to_json(const WaveguideSpec& spec) {
  nlohmann::json j;
  j["particle"] = to_string(spec.particle.kind());
  j["a"] = spec.a;
  j["delta"] = spec.delta;
  j["k_core"] = spec.k_core;
  if (const auto* t = std::get_if<TabulatedProfile>(&spec.profile.variant())) {
    j["profile"] = {{"radii", t->radii}, {"chi", t->chi}};
  } else {
    j["profile"] = spec.profile.describe();
  }
  return j;
}

WaveguideSpec spec_from_json(const nlohmann::json& j) {
  WaveguideSpec spec;
  spec.particle = ParticleKind(parse_particle(j.at("particle").get<std::string>()));
  spec.a = j.at("a").get<double>();
  spec.delta = j.at("delta").get<double>();
  spec.k_core = j.at("k_core").get<double>();
  const auto& p = j.at("profile");
  if (p.is_object()) {
    spec.profile = RadialProfile::tabulated(p.at("radii").get<std::vector<double>>(), p.at("chi").get<std::vector<double>>());
  } else {
    spec.profile = parse_profile(p.get<std::string>());
  }
  return spec;
}

}  // namespace soilab
