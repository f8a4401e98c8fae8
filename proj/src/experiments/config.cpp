#include "qlab/experiments.hpp"

namespace qlab::experiments {

namespace {

bool compatible(const json& def, const json& value) {
  if (def.is_boolean()) return value.is_boolean();
  if (def.is_number_integer()) return value.is_number_integer();
  if (def.is_number()) return value.is_number();
  if (def.is_string()) return value.is_string();
  if (def.is_array()) {
    if (!value.is_array()) return false;
    if (def.empty()) return true;
    // Element type follows the first default element.
    for (const auto& v : value)
      if (!compatible(def.front(), v)) return false;
    return true;
  }
  return false;
}

}  // namespace

json resolve_config(const Experiment& e, const json& user) {
  json params = e.defaults;
  if (user.is_null()) return params;
  if (!user.is_object()) throw ConfigError("config must be a flat JSON object");
  for (const auto& [key, value] : user.items()) {
    if (key == "seed" || key == "out") continue;
    if (key == "experiment") {
      if (!value.is_string() || value.get<std::string>() != e.name)
        throw ConfigError("config names experiment " + value.dump() + ", expected '" + e.name + "'");
      continue;
    }
    if (!params.contains(key)) throw ConfigError("unknown config key '" + key + "' for " + e.name);
    if (!compatible(params[key], value))
      throw ConfigError("config key '" + key + "' has wrong type (default " + params[key].dump() + ")");
    params[key] = value;
  }
  return params;
}

}  // namespace qlab::experiments
