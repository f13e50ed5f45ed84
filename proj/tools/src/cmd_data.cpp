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

// preprocess and arrange.

#include <filesystem>
#include <string>

#include "dfkit/cli/app.hpp"
#include "dfkit/error.hpp"
#include "dfkit/manifest.hpp"
#include "dfkit/preprocess.hpp"

namespace dfkit::cli {
namespace {

namespace fs = std::filesystem;

const DatasetLayout& layout_for(ConfigReader& config) {
  const std::string name = config.require_string("dataset_name");
  const DatasetLayout* layout = find_dataset_layout(name);
  if (!layout) {
    std::string known;
    for (const auto& s : supported_datasets()) known += (known.empty() ? "" : ", ") + s;
    throw ConfigSchemaError("dataset_name", "unknown dataset \"" + name + "\" (known: " + known + ")");
  }
  return *layout;
}

std::optional<std::string> comp_for(ConfigReader& config, const DatasetLayout& layout) {
  auto comp = config.optional_string("comp");
  if (comp && !parse_compression(*comp)) {
    throw ConfigSchemaError("comp", "expected raw, c23 or c40, got \"" + *comp + "\"");
  }
  if (layout.uses_compression && !comp) {
    throw ConfigSchemaError("comp", "required for " + layout.name);
  }
  return comp;
}

fs::path existing_root(ConfigReader& config) {
  fs::path root = config.require_path("dataset_root_path");
  if (!fs::is_directory(root)) throw ConfigSchemaError("dataset_root_path", "not a directory: " + root.string());
  return root;
}

}  // namespace

CommandResult run_preprocess(ConfigReader& config, RunContext& ctx) {
  PreprocessConfig pc;
  const DatasetLayout& layout = layout_for(config);
  pc.dataset_name = layout.name;
  pc.dataset_root_path = existing_root(config);
  pc.comp = comp_for(config, layout);

  const std::string mode = config.get_string("mode", "fixed_num_frames");
  constexpr std::int64_t kMax = 1'000'000'000;
  if (mode == "fixed_num_frames") {
    pc.plan = FrameSamplingPlan::fixed_num(static_cast<std::size_t>(config.get_int("num_frames", 32, 1, kMax)));
    config.optional_int("stride", 1, kMax);
  } else if (mode == "fixed_stride") {
    const auto stride = config.optional_int("stride", 1, kMax);
    if (!stride) throw ConfigSchemaError("stride", "required when mode is fixed_stride");
    pc.plan = FrameSamplingPlan::fixed_stride(static_cast<std::size_t>(*stride));
    config.optional_int("num_frames", 1, kMax);
  } else {
    throw ConfigSchemaError("mode", "expected fixed_num_frames or fixed_stride, got \"" + mode + "\"");
  }
  config.finish();

  ctx.set_run_manifest(pc.dataset_root_path / "run_manifest.preprocess.json");
  LogSink& log = ctx.open_log(pc.dataset_root_path / "preprocess.log");
  log.info("preprocess " + layout.name + " with " + std::to_string(ctx.options().workers) + " workers");

  const PreprocessSummary summary = preprocess_dataset(pc, ctx.options().workers, log);
  CommandResult result;
  result.succeeded = summary.videos.size();
  result.failures = summary.failures;
  std::size_t frames = 0, skipped = 0, failed_frames = 0;
  for (const auto& v : summary.videos) {
    frames += v.written.size();
    skipped += v.skipped_no_face;
    failed_frames += v.failed_frames;
  }
  result.summary = {{"videos", summary.videos.size()},
                    {"failed_videos", summary.failures.size()},
                    {"frames_written", frames},
                    {"frames_without_face", skipped},
                    {"frames_failed", failed_frames}};
  if (summary.videos.empty() && summary.failures.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no videos found under " + pc.dataset_root_path.string());
  }
  ctx.out() << "preprocessed " << summary.videos.size() << " videos, " << frames << " frames";
  if (!summary.failures.empty()) ctx.out() << ", " << summary.failures.size() << " failed";
  ctx.out() << '\n';
  return result;
}

CommandResult run_arrange(ConfigReader& config, RunContext& ctx) {
  ArrangeConfig ac;
  const DatasetLayout& layout = layout_for(config);
  ac.dataset_name = layout.name;
  ac.dataset_root_path = existing_root(config);
  ac.output_file_path = config.require_path("output_file_path");
  ac.comp = comp_for(config, layout);
  ac.perturbation = config.optional_string("perturbation");
  config.finish();

  ctx.set_run_manifest(fs::path(ac.output_file_path).concat(".run.json"));
  LogSink& log = ctx.open_log(fs::path(ac.output_file_path).replace_extension(".log"));

  const DatasetManifest manifest = arrange_dataset(ac);
  const ValidationReport report = validate_manifest(manifest, ac.dataset_root_path);
  CommandResult result;
  result.succeeded = manifest.videos.size();
  for (const auto& issue : report.issues) {
    result.failures.push_back(issue.video_id + " (" + std::string(to_string(issue.split)) + "): " +
                              std::string(to_string(issue.kind)) + " " + issue.detail);
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& v : manifest.videos) {
    counts[std::string(to_string(v.label)) + "/" + std::string(to_string(v.split))] += 1;
  }
  result.summary = {{"records", manifest.videos.size()}, {"counts", counts},
                    {"output_file_path", ac.output_file_path.generic_string()}};
  log.info("arranged " + std::to_string(manifest.videos.size()) + " records into " +
           ac.output_file_path.string());
  ctx.out() << "wrote " << manifest.videos.size() << " records to " << ac.output_file_path.string() << '\n';
  return result;
}

}  // namespace dfkit::cli
