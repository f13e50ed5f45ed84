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

#ifndef DFKIT_LOG_HPP_
#define DFKIT_LOG_HPP_

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace dfkit {

enum class LogLevel { kInfo, kWarning, kError };

// Shared sink for worker output. Implementations must be thread-safe.
class LogSink {
 public:
  virtual ~LogSink() = default;
  virtual void write(LogLevel level, std::string_view message) = 0;

  void info(std::string_view m) { write(LogLevel::kInfo, m); }
  void warn(std::string_view m) { write(LogLevel::kWarning, m); }
  void error(std::string_view m) { write(LogLevel::kError, m); }
};

class NullLogSink final : public LogSink {
 public:
  void write(LogLevel, std::string_view) override {}
};

// Appends "<ISO-8601 UTC timestamp> <LEVEL> <message>" lines.
class FileLogSink final : public LogSink {
 public:
  explicit FileLogSink(const std::filesystem::path& path);
  void write(LogLevel level, std::string_view message) override;

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

// Keeps lines in memory; used by tests and by the CLI to echo failures.
class MemoryLogSink final : public LogSink {
 public:
  void write(LogLevel level, std::string_view message) override;
  std::vector<std::string> lines() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> lines_;
};

std::string_view to_string(LogLevel level);

// Current time as 2026-01-31T12:00:00.000Z.
std::string timestamp_utc();

}  // namespace dfkit

#endif  // DFKIT_LOG_HPP_
