#include "ojj/cli/config.hpp"

#include <cmath>
#include <fstream>

namespace ojj::cli {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kProtocol: return "protocol";
    case ScenarioKind::kInterference: return "interference";
    case ScenarioKind::kRing: return "ring";
    case ScenarioKind::kBragg: return "bragg";
    case ScenarioKind::kSweep: return "sweep";
    case ScenarioKind::kSelftest: return "selftest";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_kind(std::string_view name) {
  for (auto kind : {ScenarioKind::kProtocol, ScenarioKind::kInterference, ScenarioKind::kRing,
                    ScenarioKind::kBragg, ScenarioKind::kSweep, ScenarioKind::kSelftest}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

ScenarioConfig parse_config(const json& doc, ScenarioKind expected) {
  if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  static const std::set<std::string> known{"schema_version", "kind", "output_dir", "emit_plots",
                                           "parameters"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError(key, "unknown key");
  }

  if (!doc.contains("schema_version")) throw ConfigError("schema_version", "missing");
  const auto& version = doc["schema_version"];
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw ConfigError("schema_version", "must be " + std::to_string(kSchemaVersion));
  }

  ScenarioConfig config;
  config.kind = expected;
  config.source = doc;
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) throw ConfigError("kind", "must be a string");
    const auto kind = parse_kind(doc["kind"].get<std::string>());
    if (!kind) throw ConfigError("kind", "unknown scenario kind");
    if (*kind != expected) {
      throw ConfigError("kind", "config is for '" + to_string(*kind) + "' but subcommand is '" +
                                    to_string(expected) + "'");
    }
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("output_dir", "must be a string");
    config.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("emit_plots")) {
    if (!doc["emit_plots"].is_boolean()) throw ConfigError("emit_plots", "must be true or false");
    config.emit_plots = doc["emit_plots"].get<bool>();
  }
  if (doc.contains("parameters")) {
    if (!doc["parameters"].is_object()) throw ConfigError("parameters", "must be an object");
    config.parameters = doc["parameters"];
  } else if (expected != ScenarioKind::kSelftest) {
    throw ConfigError("parameters", "missing");
  }
  return config;
}

ScenarioConfig load_config(const std::string& path, ScenarioKind expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, expected);
}

ParamReader::ParamReader(const json& params, std::string prefix)
    : params_(params), prefix_(std::move(prefix)) {
  if (!params_.is_object()) throw ConfigError(prefix_, "must be an object");
}

bool ParamReader::has(const std::string& key) const { return params_.contains(key); }

const json& ParamReader::require(const std::string& key) {
  seen_.insert(key);
  if (!params_.contains(key)) throw ConfigError(key, "required parameter '" + path(key) + "' is missing");
  return params_.at(key);
}

double ParamReader::number(const std::string& key) {
  const auto& v = require(key);
  if (!v.is_number()) throw ConfigError(key, "'" + path(key) + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "'" + path(key) + "' must be finite");
  return x;
}

double ParamReader::number(const std::string& key, double fallback) {
  seen_.insert(key);
  return has(key) ? number(key) : fallback;
}

int ParamReader::integer(const std::string& key) {
  const double x = number(key);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw ConfigError(key, "'" + path(key) + "' must be an integer");
  }
  return static_cast<int>(x);
}

int ParamReader::integer(const std::string& key, int fallback) {
  seen_.insert(key);
  return has(key) ? integer(key) : fallback;
}

bool ParamReader::boolean(const std::string& key, bool fallback) {
  seen_.insert(key);
  if (!has(key)) return fallback;
  const auto& v = params_.at(key);
  if (!v.is_boolean()) throw ConfigError(key, "'" + path(key) + "' must be true or false");
  return v.get<bool>();
}

std::string ParamReader::string(const std::string& key) {
  const auto& v = require(key);
  if (!v.is_string()) throw ConfigError(key, "'" + path(key) + "' must be a string");
  return v.get<std::string>();
}

std::string ParamReader::string(const std::string& key, const std::string& fallback) {
  seen_.insert(key);
  return has(key) ? string(key) : fallback;
}

std::vector<double> ParamReader::numbers(const std::string& key) {
  const auto& v = require(key);
  if (!v.is_array()) throw ConfigError(key, "'" + path(key) + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) {
      throw ConfigError(key, "'" + path(key) + "' must contain finite numbers only");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

const json& ParamReader::object(const std::string& key) {
  const auto& v = require(key);
  if (!v.is_object()) throw ConfigError(key, "'" + path(key) + "' must be an object");
  return v;
}

void ParamReader::finish() const {
  for (const auto& [key, value] : params_.items()) {
    if (!seen_.count(key)) throw ConfigError(key, "unknown parameter '" + path(key) + "'");
  }
}

}  // namespace ojj::cli
