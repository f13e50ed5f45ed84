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

#include "dfkit/log.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "dfkit/error.hpp"

namespace dfkit {

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()) % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3)
     << std::setfill('0') << ms.count() << 'Z';
  return ss.str();
}

std::string_view to_string(LogLevel level) {
  switch (level) {
    case LogLevel::kInfo: return "INFO";
    case LogLevel::kWarning: return "WARN";
    case LogLevel::kError: return "ERROR";
  }
  return "INFO";
}

FileLogSink::FileLogSink(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app);
  if (!out_) throw Error(ErrorCode::kIoError, "cannot open log " + path.string());
}

void FileLogSink::write(LogLevel level, std::string_view message) {
  const std::string stamp = timestamp_utc();
  std::lock_guard lock(mutex_);
  out_ << stamp << ' ' << to_string(level) << ' ' << message << '\n';
  out_.flush();
}

void MemoryLogSink::write(LogLevel level, std::string_view message) {
  std::lock_guard lock(mutex_);
  lines_.push_back(std::string(to_string(level)) + " " + std::string(message));
}

std::vector<std::string> MemoryLogSink::lines() const {
  std::lock_guard lock(mutex_);
  return lines_;
}

}  // namespace dfkit
