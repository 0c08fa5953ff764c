#pragma once

#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace subharmonic {

/// Inclusive uniform grid; steps = 1 yields {min}.
struct RangeSpec {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  std::vector<double> values() const;
};

/// Read-only view of one JSON object that reports problems as ConfigError
/// naming the full key path.
class ConfigNode {
 public:
  ConfigNode(std::shared_ptr<const nlohmann::json> root, const nlohmann::json* node, std::string path);

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const;

  ConfigNode child(const std::string& key) const;
  std::optional<ConfigNode> find(const std::string& key) const;

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::vector<double> number_list(const std::string& key) const;
  /// Number or the string "inf".
  double extended_number_or(const std::string& key, double fallback) const;
  RangeSpec range(const std::string& key) const;
  RangeSpec range_or(const std::string& key, RangeSpec fallback) const;
  /// Pairs [[x, p], ...].
  std::vector<std::pair<double, double>> pair_list(const std::string& key) const;

  /// Array of objects, each addressed as key[i].
  std::vector<ConfigNode> object_list(const std::string& key) const;

  /// ConfigError for any key outside `allowed`.
  void expect_keys(std::initializer_list<const char*> allowed) const;

  const nlohmann::json& raw() const { return *node_; }

 private:
  std::string key_path(const std::string& key) const;
  const nlohmann::json& value(const std::string& key) const;

  std::shared_ptr<const nlohmann::json> root_;
  const nlohmann::json* node_;
  std::string path_;
};

/// Parses JSON text; syntax errors report line and column.
ConfigNode parse_config(const std::string& text);
ConfigNode load_config(const std::string& path);

}  // namespace subharmonic
