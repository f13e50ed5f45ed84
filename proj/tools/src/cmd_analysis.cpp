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

// eval and spectrum.

#include <algorithm>
#include <cstdio>

#include "dfkit/cli/app.hpp"
#include "dfkit/cli/report.hpp"
#include "dfkit/error.hpp"
#include "dfkit/manifest.hpp"
#include "dfkit/metrics.hpp"
#include "dfkit/spectrum.hpp"
#include "io_util.hpp"

namespace dfkit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string cell(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_report_table(const std::map<GroupKey, MetricReport>& reports) {
  std::map<std::string, std::size_t> per_dataset;
  bool checkpoints = false;
  for (const auto& [key, r] : reports) {
    per_dataset[key.dataset] += 1;
    checkpoints |= !key.checkpoint.empty();
  }
  const bool top3 = std::any_of(per_dataset.begin(), per_dataset.end(),
                                [](const auto& kv) { return kv.second >= 2; });
  const auto summaries = top3 ? summarize_checkpoints(reports) : std::map<std::string, CheckpointSummary>{};

  std::vector<std::string> header = {"dataset"};
  if (checkpoints) header.push_back("checkpoint");
  for (const char* h : {"n_real", "n_fake", "auc", "ap", "eer", "acc"}) header.emplace_back(h);
  if (top3) header.emplace_back("top3_auc");

  std::vector<std::vector<std::string>> rows;
  for (const auto& [key, r] : reports) {
    std::vector<std::string> row = {key.dataset};
    if (checkpoints) row.push_back(key.checkpoint.empty() ? "-" : key.checkpoint);
    row.push_back(std::to_string(r.n_neg));
    row.push_back(std::to_string(r.n_pos));
    row.push_back(cell(r.auc));
    row.push_back(cell(r.ap));
    row.push_back(cell(r.eer));
    row.push_back(cell(r.acc));
    if (top3) row.push_back(cell(summaries.at(key.dataset).top3_auc));
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += c + 1 == cells.size() ? cells[c] : pad(cells[c], width[c] + 2);
    }
    return out + '\n';
  };
  std::string out = line(header);
  for (const auto& row : rows) out += line(row);
  return out;
}

CommandResult run_eval(ConfigReader& config, RunContext& ctx) {
  const auto inputs = config.require_path_list("predictions");
  const fs::path out_dir = config.require_path("output_dir");
  const double threshold = config.get_double("threshold", 0.5, 0.0, 1.0);
  const std::string group_by = config.get_string("group_by", "auto");
  if (group_by != "auto" && group_by != "dataset" && group_by != "dataset_checkpoint") {
    throw ConfigSchemaError("group_by", "expected auto, dataset or dataset_checkpoint, got \"" + group_by + "\"");
  }
  const bool write_curves = config.get_bool("write_curves", true);
  config.finish();

  ctx.set_run_manifest(out_dir / "run_manifest.json");
  LogSink& log = ctx.open_log(out_dir / "eval.log");

  CommandResult result;
  std::vector<PredictionRecord> records;
  for (const auto& path : inputs) {
    try {
      auto loaded = load_prediction_dump(path);
      // Several dumps without a checkpoint column are taken as one checkpoint each.
      if (inputs.size() > 1) {
        for (auto& r : loaded) {
          if (r.checkpoint.empty()) r.checkpoint = path.stem().string();
        }
      }
      log.info("loaded " + std::to_string(loaded.size()) + " predictions from " + path.string());
      records.insert(records.end(), loaded.begin(), loaded.end());
      ++result.succeeded;
    } catch (const std::exception& e) {
      result.failures.push_back(e.what());
    }
  }
  if (records.empty()) return result;

  bool any_checkpoint = false;
  for (const auto& r : records) any_checkpoint |= !r.checkpoint.empty();
  const GroupBy grouping = group_by == "dataset" || (group_by == "auto" && !any_checkpoint)
                               ? GroupBy::kDataset
                               : GroupBy::kDatasetCheckpoint;
  const auto reports = aggregate(records, grouping, threshold);

  for (const auto& [key, r] : reports) {
    if (!r.auc) log.warn(key.dataset + ": single-class group, AUC/EER undefined");
    if (!write_curves) continue;
    std::string stem = slug(key.dataset);
    if (!key.checkpoint.empty()) stem += "__" + slug(key.checkpoint);
    if (r.auc) write_text_file(out_dir / "curves" / (stem + "_roc.csv"), curve_to_csv(r.roc, "fpr", "tpr"));
    if (r.ap) write_text_file(out_dir / "curves" / (stem + "_pr.csv"), curve_to_csv(r.pr, "recall", "precision"));
  }
  const std::string table = format_report_table(reports);
  write_text_file(out_dir / "report.json", report_to_json(reports));
  write_text_file(out_dir / "report.txt", table);

  json top3 = json::object();
  if (grouping == GroupBy::kDatasetCheckpoint) {
    for (const auto& [dataset, s] : summarize_checkpoints(reports)) {
      top3[dataset] = {{"checkpoints", s.checkpoints},
                       {"top3_auc", optional_json(s.top3_auc)},
                       {"top3_ap", optional_json(s.top3_ap)},
                       {"top3_acc", optional_json(s.top3_acc)},
                       {"top1_auc", optional_json(s.top1_auc)}};
    }
    write_text_file(out_dir / "top3.json", top3.dump(2) + '\n');
  }
  result.summary = {{"records", records.size()}, {"groups", reports.size()}, {"top3", top3}};
  ctx.out() << table;
  return result;
}

CommandResult run_spectrum(ConfigReader& config, RunContext& ctx) {
  const auto manifest_path = config.optional_path("manifest_path");
  const auto real_dir = config.optional_path("real_dir");
  const auto fake_dir = config.optional_path("fake_dir");
  std::optional<fs::path> root;
  std::optional<std::string> method;
  Split split = Split::kTest;
  if (manifest_path) {
    if (real_dir) throw ConfigSchemaError("real_dir", "conflicts with manifest_path");
    if (fake_dir) throw ConfigSchemaError("fake_dir", "conflicts with manifest_path");
    root = config.require_path("dataset_root_path");
    const std::string s = config.get_string("split", "test");
    const auto parsed = parse_split(s);
    if (!parsed) throw ConfigSchemaError("split", "expected train, validation or test, got \"" + s + "\"");
    split = *parsed;
    method = config.optional_string("method");
  } else if (!real_dir || !fake_dir) {
    throw ConfigSchemaError(real_dir ? "fake_dir" : "real_dir",
                            "give manifest_path, or both real_dir and fake_dir");
  }
  const fs::path out_dir = config.require_path("output_dir");
  const auto sample_count = static_cast<std::size_t>(config.get_int("sample_count", 2000, 1, 100'000'000));
  SpectrumOptions options;
  options.side = static_cast<int>(config.get_int("side", options.side, 8, 8192));
  options.sigma_fraction = config.get_double("sigma_fraction", options.sigma_fraction, 1e-6, 10.0);
  options.log_magnitude = config.get_bool("log_magnitude", options.log_magnitude);
  options.workers = ctx.options().workers;
  config.finish();

  ctx.set_run_manifest(out_dir / "run_manifest.json");
  LogSink& log = ctx.open_log(out_dir / "spectrum.log");

  std::vector<fs::path> real, fake;
  if (manifest_path) {
    const DatasetManifest manifest = load_manifest(*manifest_path);
    for (const auto& record : query_split(manifest, split)) {
      if (record.label == Label::kFake && method && record.method != method) continue;
      auto& into = record.label == Label::kReal ? real : fake;
      for (const auto& f : record.frame_paths) into.push_back(*root / f);
    }
  } else {
    real = list_images(*real_dir);
    fake = list_images(*fake_dir);
  }
  if (real.empty()) throw Error(ErrorCode::kEmptySet, "no real images");
  if (fake.empty()) throw Error(ErrorCode::kEmptySet, "no fake images");

  const SpectrumResult r = spectrum_difference(real, fake, sample_count, ctx.options().seed, options);
  const std::pair<const char*, const cv::Mat*> grids[] = {
      {"real_avg", &r.real_avg}, {"fake_avg", &r.fake_avg}, {"difference", &r.difference}};
  for (const auto& [name, grid] : grids) {
    write_image_file(out_dir / (std::string(name) + ".png"), grid_to_heatmap(*grid));
    write_text_file(out_dir / (std::string(name) + ".csv"), grid_to_csv(*grid));
  }
  log.info("spectrum over " + std::to_string(r.n_real) + " real and " + std::to_string(r.n_fake) + " fake images");

  CommandResult result;
  result.succeeded = 1;
  result.summary = {{"n_real", r.n_real}, {"n_fake", r.n_fake}, {"side", options.side}};
  ctx.out() << "spectrum of " << r.n_real << " real and " << r.n_fake << " fake images written to "
            << out_dir.string() << '\n';
  return result;
}

}  // namespace dfkit::cli
