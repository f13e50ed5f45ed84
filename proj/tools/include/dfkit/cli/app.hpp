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

#ifndef DFKIT_CLI_APP_HPP_
#define DFKIT_CLI_APP_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dfkit/cli/config.hpp"
#include "dfkit/log.hpp"
#include "json.hpp"

namespace dfkit::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitPartial = 2 };

struct GlobalOptions {
  std::filesystem::path config_path;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::optional<std::filesystem::path> log_path;
};

// State shared between the dispatcher and one command.
class RunContext {
 public:
  RunContext(GlobalOptions options, std::ostream& out);

  const GlobalOptions& options() const { return options_; }
  std::ostream& out() { return out_; }

  // Opens --log if given, otherwise `fallback`. Later calls return the same
  // sink. Before the first call log() discards messages.
  LogSink& open_log(const std::filesystem::path& fallback);
  LogSink& log() {
    if (sink_) return *sink_;
    return null_;
  }
  std::optional<std::filesystem::path> log_path() const { return opened_log_; }

  // Where the run-manifest goes; set once outputs are located.
  void set_run_manifest(std::filesystem::path path) { run_manifest_ = std::move(path); }
  const std::optional<std::filesystem::path>& run_manifest() const { return run_manifest_; }

 private:
  GlobalOptions options_;
  std::ostream& out_;
  NullLogSink null_;
  std::unique_ptr<FileLogSink> sink_;
  std::optional<std::filesystem::path> opened_log_;
  std::optional<std::filesystem::path> run_manifest_;
};

struct CommandResult {
  std::size_t succeeded = 0;
  std::vector<std::string> failures;
  nlohmann::json summary = nlohmann::json::object();
};

CommandResult run_preprocess(ConfigReader& config, RunContext& ctx);
CommandResult run_arrange(ConfigReader& config, RunContext& ctx);
CommandResult run_synthesize(ConfigReader& config, RunContext& ctx);
CommandResult run_augment_preview(ConfigReader& config, RunContext& ctx);
CommandResult run_eval(ConfigReader& config, RunContext& ctx);
CommandResult run_spectrum(ConfigReader& config, RunContext& ctx);

// Parses argv (without the program name), runs one command and returns the
// exit code. Failures are also reported as one JSON object on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfkit::cli

#endif  // DFKIT_CLI_APP_HPP_
