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

#include "dfkit/cli/app.hpp"

#include <chrono>
#include <iostream>

#include <opencv2/core/version.hpp>

#include "CLI11.hpp"
#include "dfkit/error.hpp"
#include "dfkit/landmarks.hpp"
#include "dfkit/manifest.hpp"
#include "dfkit/parallel.hpp"
#include "io_util.hpp"

#ifndef DFKIT_VERSION
#define DFKIT_VERSION "unknown"
#endif

namespace dfkit::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

using CommandFn = CommandResult (*)(ConfigReader&, RunContext&);

struct CommandEntry {
  const char* name;
  const char* help;
  CommandFn fn;
};

constexpr CommandEntry kCommands[] = {
    {"preprocess", "Sample, align and crop faces from raw videos", run_preprocess},
    {"arrange", "Write the dataset manifest JSON", run_arrange},
    {"synthesize", "Generate blended forgeries with masks and boundary maps", run_synthesize},
    {"augment-preview", "Render seeded augmentation variants of images", run_augment_preview},
    {"eval", "Frame-level metrics from prediction dumps", run_eval},
    {"spectrum", "Average high-pass spectra of real and fake images", run_spectrum},
};

json versions() {
  return {{"dfkit", DFKIT_VERSION},
          {"opencv", CV_VERSION},
          {"face_template", std::string(face_template_version())},
          {"manifest_schema", kManifestSchemaVersion}};
}

json error_json(const std::exception& e) {
  if (const auto* c = dynamic_cast<const ConfigSchemaError*>(&e)) {
    return {{"type", "ConfigSchemaError"}, {"key", c->key()}, {"message", c->what()}};
  }
  if (const auto* d = dynamic_cast<const Error*>(&e)) {
    return {{"type", std::string(to_string(d->code()))}, {"message", d->what()}};
  }
  return {{"type", "InternalError"}, {"message", e.what()}};
}

}  // namespace

RunContext::RunContext(GlobalOptions options, std::ostream& out)
    : options_(std::move(options)), out_(out) {}

LogSink& RunContext::open_log(const fs::path& fallback) {
  if (!sink_) {
    const fs::path path = options_.log_path.value_or(fallback);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    sink_ = std::make_unique<FileLogSink>(path);
    opened_log_ = path;
  }
  return *sink_;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deepfake dataset preprocessing, synthesis and evaluation", "dfkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  GlobalOptions options;
  options.workers = default_worker_count();
  std::string config_path;
  std::string log_path;
  app.add_option("--config", config_path, "YAML config for the command")->required();
  app.add_option("--seed", options.seed, "Top-level seed; all randomness derives from it");
  app.add_option("--workers", options.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--log", log_path, "Log file (default: beside the outputs)");

  const CommandEntry* chosen = nullptr;
  for (const auto& c : kCommands) {
    app.add_subcommand(c.name, c.help)->callback([&chosen, &c] { chosen = &c; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << json{{"status", "failed"},
                {"exit_code", kExitFailure},
                {"error", {{"type", "UsageError"}, {"message", e.what()}}}}
               .dump()
        << '\n';
    return kExitFailure;
  }

  options.config_path = config_path;
  if (!log_path.empty()) options.log_path = fs::path(log_path);
  RunContext ctx(options, out);

  const std::string started_at = timestamp_utc();
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<ConfigReader> reader;
  CommandResult result;
  json error;
  int code = kExitOk;
  try {
    reader.emplace(ConfigReader::load(options.config_path));
    result = chosen->fn(*reader, ctx);
    if (!result.failures.empty()) code = result.succeeded == 0 ? kExitFailure : kExitPartial;
  } catch (const std::exception& e) {
    error = error_json(e);
    code = kExitFailure;
    ctx.log().error(std::string(chosen->name) + " failed: " + e.what());
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const char* status = code == kExitOk ? "ok" : code == kExitPartial ? "partial" : "failed";

  for (const auto& f : result.failures) ctx.log().error(f);

  if (ctx.run_manifest()) {
    json manifest = {
        {"command", chosen->name},
        {"config_path", options.config_path.generic_string()},
        {"config", reader ? reader->effective() : json::object()},
        {"seed", options.seed},
        {"workers", options.workers},
        {"versions", versions()},
        {"started_at", started_at},
        {"wall_time_seconds", wall},
        {"status", status},
        {"exit_code", code},
        {"summary", result.summary},
        {"failures", result.failures},
    };
    if (!error.is_null()) manifest["error"] = error;
    if (ctx.log_path()) manifest["log_path"] = ctx.log_path()->generic_string();
    try {
      write_text_file(*ctx.run_manifest(), manifest.dump(2) + '\n');
    } catch (const std::exception& e) {
      if (error.is_null()) error = error_json(e);
      code = kExitFailure;
      status = "failed";
    }
  }

  if (code != kExitOk) {
    json report = {{"status", status}, {"exit_code", code}, {"command", chosen->name}};
    if (!error.is_null()) report["error"] = error;
    if (!result.failures.empty()) report["failures"] = result.failures;
    if (ctx.run_manifest()) report["run_manifest"] = ctx.run_manifest()->generic_string();
    err << report.dump() << '\n';
  }
  return code;
}

}  // namespace dfkit::cli
