#include "subharmonic/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "subharmonic/errors.hpp"
#include "subharmonic/params.hpp"

namespace subharmonic {

using nlohmann::json;

std::vector<double> RangeSpec::values() const {
  std::vector<double> out;
  if (steps == 1) {
    out.push_back(min);
    return out;
  }
  for (int i = 0; i < steps; ++i) out.push_back(min + (max - min) * i / (steps - 1));
  return out;
}

ConfigNode::ConfigNode(std::shared_ptr<const json> root, const json* node, std::string path)
    : root_(std::move(root)), node_(node), path_(std::move(path)) {
  if (!node_->is_object()) fail(ErrorCode::ConfigError, "'" + (path_.empty() ? "<root>" : path_) + "' must be an object");
}

std::string ConfigNode::key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool ConfigNode::has(const std::string& key) const { return node_->contains(key) && !(*node_)[key].is_null(); }

const json& ConfigNode::value(const std::string& key) const {
  if (!has(key)) fail(ErrorCode::ConfigError, "missing key '" + key_path(key) + "'");
  return (*node_)[key];
}

ConfigNode ConfigNode::child(const std::string& key) const { return ConfigNode(root_, &value(key), key_path(key)); }

std::optional<ConfigNode> ConfigNode::find(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return child(key);
}

double ConfigNode::number(const std::string& key) const {
  const json& v = value(key);
  if (!v.is_number()) fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must be finite");
  return d;
}

double ConfigNode::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int ConfigNode::integer(const std::string& key) const {
  const json& v = value(key);
  if (!v.is_number_integer()) fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must be an integer");
  return v.get<int>();
}

int ConfigNode::integer_or(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

bool ConfigNode::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = value(key);
  if (!v.is_boolean()) fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must be true or false");
  return v.get<bool>();
}

std::vector<double> ConfigNode::number_list(const std::string& key) const {
  const json& v = value(key);
  if (!v.is_array() || v.empty()) fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must be a non-empty array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double ConfigNode::extended_number_or(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const json& v = value(key);
  if (v.is_string() && v.get<std::string>() == "inf") return kInfinity;
  return number(key);
}

RangeSpec ConfigNode::range(const std::string& key) const {
  const ConfigNode r = child(key);
  r.expect_keys({"min", "max", "steps"});
  RangeSpec spec{r.number("min"), r.number("max"), r.integer_or("steps", 1)};
  if (spec.steps < 1) fail(ErrorCode::ConfigError, "'" + key_path(key) + ".steps' must be >= 1");
  if (spec.max < spec.min) fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must have min <= max");
  if (spec.steps > 1 && spec.max == spec.min)
    fail(ErrorCode::ConfigError, "'" + key_path(key) + "' has steps > 1 but an empty range");
  return spec;
}

RangeSpec ConfigNode::range_or(const std::string& key, RangeSpec fallback) const {
  return has(key) ? range(key) : fallback;
}

std::vector<std::pair<double, double>> ConfigNode::pair_list(const std::string& key) const {
  const json& v = value(key);
  auto bad = [&] { fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must be an array of [x, p] pairs"); };
  if (!v.is_array() || v.empty()) bad();
  std::vector<std::pair<double, double>> out;
  for (const json& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) bad();
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

std::vector<ConfigNode> ConfigNode::object_list(const std::string& key) const {
  const json& v = value(key);
  if (!v.is_array()) fail(ErrorCode::ConfigError, "'" + key_path(key) + "' must be an array of objects");
  std::vector<ConfigNode> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(root_, &v[i], key_path(key) + "[" + std::to_string(i) + "]");
  return out;
}

void ConfigNode::expect_keys(std::initializer_list<const char*> allowed) const {
  for (const auto& item : node_->items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) fail(ErrorCode::ConfigError, "unknown key '" + key_path(item.key()) + "'");
  }
}

ConfigNode parse_config(const std::string& text) {
  auto root = std::make_shared<json>();
  try {
    *root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
    const std::size_t last_nl = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    const std::size_t column = last_nl == std::string::npos || offset == 0 ? offset + 1 : offset - last_nl;
    std::ostringstream msg;
    msg << "line " << line << ", column " << column << ": invalid JSON";
    fail(ErrorCode::ConfigError, msg.str());
  }
  return ConfigNode(root, root.get(), "");
}

ConfigNode load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace subharmonic
