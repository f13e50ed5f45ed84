/*
 * Copyright 2026 The dfkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dfkit/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dfkit::cli {
namespace {

std::string describe(const YAML::Node& n) {
  std::ostringstream s;
  s << n;
  return s.str();
}

}  // namespace

ConfigReader::ConfigReader(YAML::Node root) : root_(std::move(root)) {
  if (root_.IsNull()) root_ = YAML::Node(YAML::NodeType::Map);
  if (!root_.IsMap()) throw ConfigSchemaError("<root>", "config must be a mapping of keys to values");
}

ConfigReader ConfigReader::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigSchemaError("--config", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

ConfigReader ConfigReader::parse(const std::string& text) {
  try {
    return ConfigReader(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ConfigSchemaError("<root>", std::string("invalid YAML: ") + e.what());
  }
}

bool ConfigReader::has(const std::string& key) const {
  const YAML::Node n = root_[key];
  return n.IsDefined() && !n.IsNull();
}

YAML::Node ConfigReader::node(const std::string& key) const { return root_[key]; }

std::string ConfigReader::require_string(const std::string& key) {
  if (!has(key)) throw ConfigSchemaError(key, "required key is missing");
  return get_string(key, "");
}

std::string ConfigReader::get_string(const std::string& key, const std::string& fallback) {
  consumed_.insert(key);
  std::string v = fallback;
  if (has(key)) {
    const YAML::Node n = node(key);
    if (!n.IsScalar()) throw ConfigSchemaError(key, "expected a string, got " + describe(n));
    v = n.Scalar();
  }
  effective_[key] = v;
  return v;
}

std::optional<std::string> ConfigReader::optional_string(const std::string& key) {
  consumed_.insert(key);
  if (!has(key)) {
    effective_[key] = nullptr;
    return std::nullopt;
  }
  return get_string(key, "");
}

std::filesystem::path ConfigReader::require_path(const std::string& key) {
  return require_string(key);
}

std::optional<std::filesystem::path> ConfigReader::optional_path(const std::string& key) {
  auto s = optional_string(key);
  if (!s) return std::nullopt;
  return std::filesystem::path(*s);
}

std::optional<std::int64_t> ConfigReader::optional_int(const std::string& key, std::int64_t lo,
                                                       std::int64_t hi) {
  consumed_.insert(key);
  if (!has(key)) {
    effective_[key] = nullptr;
    return std::nullopt;
  }
  return get_int(key, 0, lo, hi);
}

std::int64_t ConfigReader::get_int(const std::string& key, std::int64_t fallback, std::int64_t lo,
                                   std::int64_t hi) {
  consumed_.insert(key);
  std::int64_t v = fallback;
  if (has(key)) {
    const YAML::Node n = node(key);
    try {
      if (!n.IsScalar()) throw YAML::Exception(YAML::Mark::null_mark(), "");
      v = n.as<std::int64_t>();
    } catch (const YAML::Exception&) {
      throw ConfigSchemaError(key, "expected an integer, got " + describe(n));
    }
  }
  if (v < lo || v > hi) {
    throw ConfigSchemaError(key, "value " + std::to_string(v) + " outside [" + std::to_string(lo) +
                                     ", " + std::to_string(hi) + "]");
  }
  effective_[key] = v;
  return v;
}

double ConfigReader::get_double(const std::string& key, double fallback, double lo, double hi) {
  consumed_.insert(key);
  double v = fallback;
  if (has(key)) {
    const YAML::Node n = node(key);
    try {
      if (!n.IsScalar()) throw YAML::Exception(YAML::Mark::null_mark(), "");
      v = n.as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigSchemaError(key, "expected a number, got " + describe(n));
    }
  }
  if (!std::isfinite(v) || v < lo || v > hi) {
    std::ostringstream s;
    s << "value " << v << " outside [" << lo << ", " << hi << "]";
    throw ConfigSchemaError(key, s.str());
  }
  effective_[key] = v;
  return v;
}

bool ConfigReader::get_bool(const std::string& key, bool fallback) {
  consumed_.insert(key);
  bool v = fallback;
  if (has(key)) {
    const YAML::Node n = node(key);
    try {
      if (!n.IsScalar()) throw YAML::Exception(YAML::Mark::null_mark(), "");
      v = n.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigSchemaError(key, "expected true or false, got " + describe(n));
    }
  }
  effective_[key] = v;
  return v;
}

std::pair<double, double> ConfigReader::get_range(const std::string& key,
                                                  std::pair<double, double> fallback, double min,
                                                  double max) {
  consumed_.insert(key);
  auto v = fallback;
  if (has(key)) {
    const YAML::Node n = node(key);
    try {
      if (!n.IsSequence() || n.size() != 2) throw YAML::Exception(YAML::Mark::null_mark(), "");
      v = {n[0].as<double>(), n[1].as<double>()};
    } catch (const YAML::Exception&) {
      throw ConfigSchemaError(key, "expected [lower, upper], got " + describe(n));
    }
  }
  if (!(v.first <= v.second) || v.first < min || v.second > max) {
    std::ostringstream s;
    s << "range [" << v.first << ", " << v.second << "] must be ordered and within [" << min
      << ", " << max << "]";
    throw ConfigSchemaError(key, s.str());
  }
  effective_[key] = {v.first, v.second};
  return v;
}

std::vector<std::filesystem::path> ConfigReader::require_path_list(const std::string& key) {
  consumed_.insert(key);
  if (!has(key)) throw ConfigSchemaError(key, "required key is missing");
  const YAML::Node n = node(key);
  std::vector<std::filesystem::path> out;
  nlohmann::json snapshot = nlohmann::json::array();
  if (n.IsScalar()) {
    out.emplace_back(n.Scalar());
  } else if (n.IsSequence()) {
    for (const auto& item : n) {
      if (!item.IsScalar()) throw ConfigSchemaError(key, "expected a list of paths");
      out.emplace_back(item.Scalar());
    }
  } else {
    throw ConfigSchemaError(key, "expected a path or a list of paths");
  }
  if (out.empty()) throw ConfigSchemaError(key, "list is empty");
  for (const auto& p : out) snapshot.push_back(p.generic_string());
  effective_[key] = snapshot;
  return out;
}

void ConfigReader::finish() const {
  std::set<std::string> keys;
  for (const auto& kv : root_) keys.insert(kv.first.as<std::string>());
  for (const auto& k : keys) {
    if (!consumed_.contains(k)) throw ConfigSchemaError(k, "unknown key");
  }
}

}  // namespace dfkit::cli
