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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/videoio.hpp>

#include "dfkit/error.hpp"
#include "dfkit/manifest.hpp"
#include "dfkit/parallel.hpp"
#include "dfkit/preprocess.hpp"
#include "json.hpp"

namespace dfkit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

std::string frame_name(std::size_t index, std::string_view ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04zu", index);
  return std::string(buf) + std::string(ext);
}

const std::vector<int>& png_params() {
  static const std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 3};
  return params;
}

void write_png(const fs::path& path, const cv::Mat& image) {
  if (!cv::imwrite(path.string(), image, png_params())) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
}

json matrix_json(const cv::Matx23d& m) {
  return json::array({json::array({m(0, 0), m(0, 1), m(0, 2)}),
                      json::array({m(1, 0), m(1, 1), m(1, 2)})});
}

struct FrameOutput {
  std::size_t index;
  CropResult crop;
  cv::Mat mask;
};

}  // namespace

FrameSource FrameSource::open(const fs::path& path) {
  FrameSource src;
  src.path_ = path;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && is_image_file(e.path())) src.images_.push_back(e.path());
    }
    std::sort(src.images_.begin(), src.images_.end());
    src.count_ = src.images_.size();
    if (src.count_ == 0) throw Error(ErrorCode::kDecodeFailure, path.string() + ": no frames");
    return src;
  }
  cv::VideoCapture cap(path.string());
  if (!fs::exists(path) || !cap.isOpened()) {
    throw Error(ErrorCode::kDecodeFailure, "cannot open video " + path.string());
  }
  // Container frame counts are unreliable; count by demuxing.
  while (cap.grab()) ++src.count_;
  if (src.count_ == 0) throw Error(ErrorCode::kDecodeFailure, path.string() + ": no frames");
  return src;
}

std::vector<cv::Mat> FrameSource::read(std::span<const std::size_t> indices) const {
  std::vector<cv::Mat> out;
  out.reserve(indices.size());
  if (!images_.empty()) {
    for (std::size_t i : indices) {
      if (i >= images_.size()) {
        out.emplace_back();
        continue;
      }
      out.push_back(cv::imread(images_[i].string(), cv::IMREAD_UNCHANGED));
    }
    return out;
  }
  cv::VideoCapture cap(path_.string());
  if (!cap.isOpened()) throw Error(ErrorCode::kDecodeFailure, "cannot open video " + path_.string());
  std::size_t pos = 0;
  for (std::size_t want : indices) {
    cv::Mat frame;
    bool ok = true;
    while (ok && pos < want) {
      ok = cap.grab();
      ++pos;
    }
    if (ok && cap.read(frame)) {
      ++pos;
      out.push_back(frame);
    } else {
      out.emplace_back();
    }
  }
  return out;
}

ProcessedVideo process_video(const VideoJob& job, const FrameSamplingPlan& plan,
                             const CropSpec& spec, const LandmarkProvider& landmarks,
                             LogSink& log) {
  spec.validate();
  const FrameSource source = FrameSource::open(job.source);
  const std::vector<std::size_t> indices = sample_frames(source.frame_count(), plan);

  std::optional<FrameSource> mask_source;
  if (job.mask_source) {
    mask_source = FrameSource::open(*job.mask_source);
    if (mask_source->frame_count() != source.frame_count()) {
      log.warn(job.video_id + ": mask has " + std::to_string(mask_source->frame_count()) +
               " frames, video has " + std::to_string(source.frame_count()));
    }
  }

  const std::vector<cv::Mat> frames = source.read(indices);
  std::vector<cv::Mat> masks;
  if (mask_source) masks = mask_source->read(indices);

  ProcessedVideo result;
  result.video_id = job.video_id;
  result.sampled = indices.size();
  result.has_masks = mask_source.has_value();

  const LandmarkSet tmpl = face_template(spec.output_size);
  std::vector<FrameOutput> outputs;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t index = indices[k];
    const LandmarkSet* face = landmarks ? landmarks(index) : nullptr;
    if (!face) {
      ++result.skipped_no_face;
      log.info(job.video_id + ": frame " + std::to_string(index) + " skipped, no face");
      continue;
    }
    try {
      if (frames[k].empty()) throw Error(ErrorCode::kDecodeFailure, "frame did not decode");
      FrameOutput out{index, warp_crop(frames[k], *face, estimate_alignment(*face, tmpl), spec), {}};
      if (mask_source) {
        if (masks[k].empty()) throw Error(ErrorCode::kDecodeFailure, "mask frame did not decode");
        out.mask = warp_mask(masks[k], out.crop.geometry, spec);
      }
      outputs.push_back(std::move(out));
    } catch (const Error& e) {
      ++result.failed_frames;
      log.warn(job.video_id + ": frame " + std::to_string(index) + " failed: " + e.what());
    }
  }

  std::error_code ec;
  fs::remove_all(job.output_dir, ec);
  fs::create_directories(job.output_dir / "frames");
  fs::create_directories(job.output_dir / "landmarks");
  if (mask_source) fs::create_directories(job.output_dir / "masks");

  json per_frame = json::object();
  for (const auto& out : outputs) {
    write_png(job.output_dir / "frames" / frame_name(out.index, ".png"), out.crop.face);
    write_landmarks(job.output_dir / "landmarks" / frame_name(out.index, ".json"), out.crop.landmarks);
    if (mask_source) write_png(job.output_dir / "masks" / frame_name(out.index, ".png"), out.mask);
    per_frame[frame_name(out.index, "")] = {{"source_to_output", matrix_json(out.crop.geometry.source_to_output)}};
    result.written.push_back(out.index);
  }

  json meta = {
      {"video_id", job.video_id},
      {"alignment_points", "five_point"},
      {"template", std::string(face_template_version())},
      {"margin", spec.margin},
      {"output_size", spec.output_size},
      {"source_frames", source.frame_count()},
      {"sampled", indices},
      {"frames", per_frame},
  };
  std::ofstream(job.output_dir / "meta.json", std::ios::binary | std::ios::trunc) << meta.dump(2) << "\n";

  log.info(job.video_id + ": sampled " + std::to_string(result.sampled) + ", written " +
           std::to_string(result.written.size()) + ", no face " +
           std::to_string(result.skipped_no_face) + ", failed " +
           std::to_string(result.failed_frames));
  return result;
}

std::vector<VideoJob> discover_video_jobs(const PreprocessConfig& config) {
  const DatasetLayout* layout = find_dataset_layout(config.dataset_name);
  if (!layout) throw Error(ErrorCode::kUnknownDataset, "dataset_name \"" + config.dataset_name + "\"");
  const fs::path& root = config.dataset_root_path;
  if (!fs::is_directory(root)) throw Error(ErrorCode::kMissingRoot, root.string());
  if (layout->uses_compression) {
    if (!config.comp || !parse_compression(*config.comp)) {
      throw Error(ErrorCode::kInvalidArgument, "comp must be raw, c23 or c40 for " + layout->name);
    }
  }

  std::vector<VideoJob> jobs;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_directory()) continue;
    const fs::path dir = it->path();
    const std::string name = dir.filename().string();
    if (name == "faces" || name == "mask_videos") {
      it.disable_recursion_pending();
      continue;
    }
    if (name != "videos") continue;
    it.disable_recursion_pending();

    const fs::path group = dir.parent_path();
    if (layout->uses_compression) {
      const fs::path rel = fs::relative(group, root);
      if (std::find(rel.begin(), rel.end(), fs::path(*config.comp)) == rel.end()) continue;
    }
    for (const auto& e : fs::directory_iterator(dir)) {
      if (!e.is_directory() && !e.is_regular_file()) continue;
      const std::string stem = e.is_directory() ? e.path().filename().string() : e.path().stem().string();
      VideoJob job;
      job.video_id = fs::relative(group, root).generic_string() + "/" + stem;
      job.source = e.path();
      job.output_dir = group / "faces" / stem;
      const fs::path masks = group / "mask_videos";
      if (fs::is_directory(masks)) {
        for (const auto& m : fs::directory_iterator(masks)) {
          const std::string mstem = m.is_directory() ? m.path().filename().string() : m.path().stem().string();
          if (mstem == stem) job.mask_source = m.path();
        }
      }
      jobs.push_back(std::move(job));
    }
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const VideoJob& a, const VideoJob& b) { return a.output_dir < b.output_dir; });
  return jobs;
}

PreprocessSummary preprocess_dataset(const PreprocessConfig& config, unsigned workers, LogSink& log) {
  const std::vector<VideoJob> jobs = discover_video_jobs(config);
  std::vector<std::optional<ProcessedVideo>> results(jobs.size());
  std::vector<std::string> errors(jobs.size());

  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const VideoJob& job = jobs[i];
    try {
      const fs::path track_path =
          job.output_dir.parent_path().parent_path() / "landmark_tracks" / (job.output_dir.filename().string() + ".json");
      std::optional<LandmarkTrack> track;
      if (fs::exists(track_path)) {
        track = LandmarkTrack::load(track_path);
      } else {
        log.warn(job.video_id + ": no landmark track at " + track_path.string());
      }
      LandmarkProvider provider = [&track](std::size_t frame) -> const LandmarkSet* {
        return track ? track->primary_face(frame) : nullptr;
      };
      results[i] = process_video(job, config.plan, config.crop, provider, log);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      log.error(job.video_id + ": " + e.what());
    }
  });

  PreprocessSummary summary;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (results[i]) {
      summary.videos.push_back(std::move(*results[i]));
    } else {
      summary.failures.push_back(jobs[i].video_id + ": " + errors[i]);
    }
  }
  return summary;
}

}  // namespace dfkit
