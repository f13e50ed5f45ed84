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

#ifndef DFKIT_CLI_CONFIG_HPP_
#define DFKIT_CLI_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

namespace dfkit::cli {

// A config value that is missing, unknown, or of the wrong shape.
class ConfigSchemaError : public std::runtime_error {
 public:
  ConfigSchemaError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Typed access to a flat YAML mapping. Every value read, including defaults,
// is recorded in effective(); finish() rejects keys nobody asked for.
class ConfigReader {
 public:
  explicit ConfigReader(YAML::Node root);
  static ConfigReader load(const std::filesystem::path& path);
  static ConfigReader parse(const std::string& text);

  bool has(const std::string& key) const;

  std::string require_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  std::optional<std::string> optional_string(const std::string& key);
  std::filesystem::path require_path(const std::string& key);
  std::optional<std::filesystem::path> optional_path(const std::string& key);

  std::int64_t get_int(const std::string& key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi);
  std::optional<std::int64_t> optional_int(const std::string& key, std::int64_t lo,
                                           std::int64_t hi);
  double get_double(const std::string& key, double fallback, double lo, double hi);
  bool get_bool(const std::string& key, bool fallback);
  // A two-element sequence [lo, hi] with lo <= hi, each within [min, max].
  std::pair<double, double> get_range(const std::string& key, std::pair<double, double> fallback,
                                      double min, double max);
  std::vector<std::filesystem::path> require_path_list(const std::string& key);

  // Throws ConfigSchemaError for the first key (alphabetically) never read.
  void finish() const;

  const nlohmann::json& effective() const { return effective_; }

 private:
  YAML::Node node(const std::string& key) const;

  YAML::Node root_;
  std::set<std::string> consumed_;
  nlohmann::json effective_ = nlohmann::json::object();
};

}  // namespace dfkit::cli

#endif  // DFKIT_CLI_CONFIG_HPP_
