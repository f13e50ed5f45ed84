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

// synthesize and augment-preview.

#include <cmath>
#include <cstdio>

#include <opencv2/imgcodecs.hpp>

#include "dfkit/augment.hpp"
#include "dfkit/cli/app.hpp"
#include "dfkit/error.hpp"
#include "dfkit/manifest.hpp"
#include "dfkit/parallel.hpp"
#include "dfkit/spectrum.hpp"
#include "dfkit/synthesis.hpp"
#include "io_util.hpp"

namespace dfkit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct PoolFace {
  std::string frame_path;  // relative to the dataset root
  XrayStream::Face face;
};

std::string numbered(std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, i);
  return buf;
}

cv::Mat unit_to_u8(const cv::Mat& unit) {
  cv::Mat out;
  unit.convertTo(out, CV_8U, 255.0);
  return out;
}

Split split_key(ConfigReader& config, const std::string& key, const std::string& fallback) {
  const std::string s = config.get_string(key, fallback);
  const auto split = parse_split(s);
  if (!split) throw ConfigSchemaError(key, "expected train, validation or test, got \"" + s + "\"");
  return *split;
}

// Real frames of one split that carry landmarks, in manifest order.
std::vector<PoolFace> load_pool(const DatasetManifest& manifest, const fs::path& root, Split split,
                                std::size_t limit, std::uint64_t seed, unsigned workers) {
  std::vector<std::pair<std::string, std::string>> candidates;
  for (const auto& record : query_split(manifest, split, Label::kReal)) {
    if (!record.landmark_paths) continue;
    for (std::size_t j = 0; j < record.frame_paths.size(); ++j) {
      candidates.emplace_back(record.frame_paths[j], (*record.landmark_paths)[j]);
    }
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::kEmptySet, "no real frames with landmarks in the " +
                                          std::string(to_string(split)) + " split");
  }
  const auto chosen = sample_indices(candidates.size(), limit, derive_key(seed, {0x706f6f6cULL}));
  std::vector<PoolFace> pool(chosen.size());
  parallel_for(chosen.size(), workers, [&](std::size_t i) {
    const auto& [frame, landmarks] = candidates[chosen[i]];
    pool[i].frame_path = frame;
    pool[i].face.image = read_image_file(root / frame, cv::IMREAD_COLOR);
    pool[i].face.landmarks = read_landmarks(root / landmarks);
  });
  return pool;
}

void write_triplet(const fs::path& dir, const SynthesisResult& r) {
  write_image_file(dir / "forged.png", r.forged);
  write_image_file(dir / "mask.png", unit_to_u8(r.mask.values()));
  write_image_file(dir / "boundary.png", unit_to_u8(r.boundary));
}

}  // namespace

CommandResult run_synthesize(ConfigReader& config, RunContext& ctx) {
  const std::string method = config.require_string("method");
  if (method != "fwa" && method != "xray") {
    throw ConfigSchemaError("method", "expected fwa or xray, got \"" + method + "\"");
  }
  const fs::path manifest_path = config.require_path("manifest_path");
  const fs::path root = config.require_path("dataset_root_path");
  const fs::path out_dir = config.require_path("output_dir");
  const Split split = split_key(config, "split", "train");
  const auto count = static_cast<std::size_t>(config.get_int("count", 16, 1, 1'000'000));
  const auto pool_limit = static_cast<std::size_t>(config.get_int("pool_size", 256, 1, 1'000'000));
  const auto neighbours = static_cast<std::size_t>(config.get_int("neighbours", 5, 1, 1000));
  BlendRecipe base;
  base.feather_sigma = config.get_double("feather_sigma", base.feather_sigma, 1e-3, 1000.0);
  base.jitter_scale = config.get_double("jitter_scale", base.jitter_scale, 0.0, 0.9);
  base.jitter_shift = config.get_double("jitter_shift", base.jitter_shift, 0.0, 1000.0);
  base.seed = ctx.options().seed;
  config.finish();

  ctx.set_run_manifest(out_dir / "run_manifest.json");
  LogSink& log = ctx.open_log(out_dir / "synthesize.log");
  const DatasetManifest manifest = load_manifest(manifest_path);
  std::vector<PoolFace> pool = load_pool(manifest, root, split, pool_limit, base.seed, ctx.options().workers);
  log.info("synthesize " + method + ": pool of " + std::to_string(pool.size()) + " faces");

  std::vector<std::string> frame_paths;
  std::vector<XrayStream::Face> faces;
  for (auto& p : pool) {
    frame_paths.push_back(p.frame_path);
    faces.push_back(std::move(p.face));
  }
  std::optional<XrayStream> stream;
  if (method == "xray") stream.emplace(faces, base, neighbours);

  std::vector<json> rows(count);
  std::vector<std::string> errors(count);
  parallel_for(count, ctx.options().workers, [&](std::size_t i) {
    const fs::path dir = out_dir / numbered(i, 5);
    try {
      json row = {{"sample", i}, {"method", method}};
      if (stream) {
        const XrayStream::Sample s = stream->generate(i);
        write_triplet(dir, s.result);
        row["target"] = frame_paths[s.target];
        row["donor"] = frame_paths[s.donor];
        row["fwa_scale"] = s.recipe.fwa_scale;
        row["recipe_seed"] = s.recipe.seed;
      } else {
        KeyedRng rng(base.seed, {i});
        const auto target = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(faces.size()) - 1));
        BlendRecipe recipe = draw_recipe(base, rng);
        recipe.seed = derive_key(base.seed, {i, 1});
        write_triplet(dir, fwa_generate(faces[target].image, faces[target].landmarks, recipe));
        row["target"] = frame_paths[target];
        row["fwa_scale"] = recipe.fwa_scale;
        row["recipe_seed"] = recipe.seed;
      }
      rows[i] = std::move(row);
    } catch (const std::exception& e) {
      errors[i] = "sample " + std::to_string(i) + ": " + e.what();
    }
  });

  CommandResult result;
  std::string index;
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i].empty()) {
      ++result.succeeded;
      index += rows[i].dump() + '\n';
    } else {
      result.failures.push_back(errors[i]);
    }
  }
  write_text_file(out_dir / "samples.jsonl", index);
  result.summary = {{"method", method}, {"samples", result.succeeded}, {"pool", faces.size()}};
  log.info("wrote " + std::to_string(result.succeeded) + " triplets to " + out_dir.string());
  ctx.out() << "wrote " << result.succeeded << " " << method << " triplets to " << out_dir.string() << '\n';
  return result;
}

namespace {

AugmentPipeline read_pipeline(ConfigReader& config, std::uint64_t seed) {
  AugmentPipeline p;
  p.seed = seed;
  auto prob = [&](const std::string& key, double fallback) { return config.get_double(key, fallback, 0.0, 1.0); };
  auto interval = [](std::pair<double, double> r) { return Interval{r.first, r.second}; };
  auto add = [&](const std::string& key, AugmentParams params, double probability) {
    AugmentOp op{std::move(params), probability};
    try {
      op.validate();
    } catch (const Error& e) {
      throw ConfigSchemaError(key, e.what());
    }
    p.ops.push_back(std::move(op));
  };

  add("flip_probability", HFlipParams{}, prob("flip_probability", 0.5));
  add("rotate_limit", RotateParams{interval(config.get_range("rotate_limit", {-10, 10}, -180, 180))},
      prob("rotate_probability", 0.5));
  const auto blur = config.get_range("blur_limit", {3, 7}, 1, 99);
  if (blur.first != std::floor(blur.first) || blur.second != std::floor(blur.second)) {
    throw ConfigSchemaError("blur_limit", "kernel sizes must be integers");
  }
  add("blur_limit", BlurParams{static_cast<int>(blur.first), static_cast<int>(blur.second)},
      prob("blur_probability", 0.5));
  add("resolution",
      IsotropicResizeParams{static_cast<int>(config.get_int("resolution", 256, 8, 8192))},
      prob("resize_probability", 1.0));
  add("brightness_limit",
      BrightnessContrastParams{interval(config.get_range("brightness_limit", {-0.1, 0.1}, -1, 1)),
                               interval(config.get_range("contrast_limit", {-0.1, 0.1}, -1, 1))},
      prob("brightness_contrast_probability", 0.5));
  add("fancy_pca_alpha_std", FancyPcaParams{config.get_double("fancy_pca_alpha_std", 0.1, 0.0, 10.0)},
      prob("fancy_pca_probability", 0.5));
  add("hue_shift_limit",
      HsvParams{interval(config.get_range("hue_shift_limit", {-10, 10}, -180, 180)),
                interval(config.get_range("sat_shift_limit", {-0.1, 0.1}, -1, 1)),
                interval(config.get_range("val_shift_limit", {-0.1, 0.1}, -1, 1))},
      prob("hsv_probability", 0.5));
  add("quality_lower",
      JpegParams{static_cast<int>(config.get_int("quality_lower", 40, 1, 100)),
                 static_cast<int>(config.get_int("quality_upper", 100, 1, 100))},
      prob("compression_probability", 0.5));
  return p;
}

}  // namespace

CommandResult run_augment_preview(ConfigReader& config, RunContext& ctx) {
  const fs::path input = config.require_path("input");
  const fs::path out_dir = config.require_path("output_dir");
  const auto variants = static_cast<std::size_t>(config.get_int("variants", 8, 1, 10'000));
  const AugmentPipeline pipeline = read_pipeline(config, ctx.options().seed);
  config.finish();

  ctx.set_run_manifest(out_dir / "run_manifest.json");
  LogSink& log = ctx.open_log(out_dir / "augment-preview.log");
  const auto images = list_images(input);
  if (images.empty()) throw Error(ErrorCode::kEmptySet, "no images in " + input.string());

  const std::size_t total = images.size() * variants;
  std::vector<std::string> rows(total);
  std::vector<std::string> errors(images.size());
  std::vector<cv::Mat> decoded(images.size());
  parallel_for(images.size(), ctx.options().workers, [&](std::size_t i) {
    try {
      decoded[i] = read_image_file(images[i], cv::IMREAD_COLOR);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  parallel_for(total, ctx.options().workers, [&](std::size_t unit) {
    const std::size_t i = unit / variants;
    const std::size_t k = unit % variants;
    if (decoded[i].empty()) return;
    auto [image, applied] = apply_pipeline(pipeline, decoded[i], unit);
    const std::string name = images[i].stem().string() + "_v" + numbered(k, 2) + ".png";
    write_image_file(out_dir / name, image);
    json ops = json::array();
    for (const auto& op : applied) {
      ops.push_back({{"kind", std::string(to_string(op.kind))}, {"fired", op.fired}, {"params", op.params}});
    }
    rows[unit] = json{{"source", images[i].filename().string()}, {"variant", k}, {"image_index", unit},
                      {"output", name}, {"ops", ops}}
                     .dump();
  });

  CommandResult result;
  std::string index;
  for (std::size_t unit = 0; unit < total; ++unit) {
    if (!rows[unit].empty()) index += rows[unit] + '\n';
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (errors[i].empty()) {
      ++result.succeeded;
    } else {
      result.failures.push_back(images[i].string() + ": " + errors[i]);
    }
  }
  write_text_file(out_dir / "applied.jsonl", index);
  result.summary = {{"images", result.succeeded}, {"variants", variants}};
  log.info("rendered " + std::to_string(result.succeeded * variants) + " variants");
  ctx.out() << "wrote " << result.succeeded * variants << " variants to " << out_dir.string() << '\n';
  return result;
}

}  // namespace dfkit::cli
