#pragma once

// Scenario configuration: one JSON document per run.
//
//   {
//     "schema_version": 1,
//     "kind": "protocol",          optional, must match the subcommand
//     "output_dir": "results",     optional, --out overrides
//     "emit_plots": false,         optional
//     "parameters": { ... }        kind-specific, see scenario.hpp
//   }

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ojj/errors.hpp"

namespace ojj::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class ScenarioKind { kProtocol, kInterference, kRing, kBragg, kSweep, kSelftest };

std::string to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_kind(std::string_view name);

/// Bad or missing configuration. `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error("configuration error at '" + key + "': " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kProtocol;
  json parameters = json::object();
  std::string output_dir = "results";
  bool emit_plots = false;
  json source;  // the document as read, echoed into provenance
};

/// Validates the envelope of a parsed document (schema version, kind, known
/// top-level keys). Parameter contents are checked by the scenario runner.
ScenarioConfig parse_config(const json& doc, ScenarioKind expected);

/// Reads and parses `path`; ConfigError on I/O or JSON syntax errors.
ScenarioConfig load_config(const std::string& path, ScenarioKind expected);

/// Typed access to a parameter object. Every key read is remembered, and
/// `finish()` rejects whatever was not read.
class ParamReader {
 public:
  ParamReader(const json& params, std::string prefix = "parameters");

  bool has(const std::string& key) const;

  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key);
  const json& object(const std::string& key);

  void finish() const;

 private:
  const json& require(const std::string& key);
  std::string path(const std::string& key) const { return prefix_ + "." + key; }

  const json& params_;
  std::string prefix_;
  std::set<std::string> seen_;
};

}  // namespace ojj::cli
