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

#ifndef DFKIT_PREPROCESS_HPP_
#define DFKIT_PREPROCESS_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "dfkit/landmarks.hpp"
#include "dfkit/log.hpp"

namespace dfkit {

// ---------------------------------------------------------------------------
// Frame sampling

enum class SamplingMode { kFixedNumFrames, kFixedStride };

struct FrameSamplingPlan {
  SamplingMode mode = SamplingMode::kFixedNumFrames;
  std::optional<std::size_t> num_frames = 32;
  std::optional<std::size_t> stride;

  static FrameSamplingPlan fixed_num(std::size_t n) {
    return {SamplingMode::kFixedNumFrames, n, std::nullopt};
  }
  static FrameSamplingPlan fixed_stride(std::size_t k) {
    return {SamplingMode::kFixedStride, std::nullopt, k};
  }
};

// Strictly increasing frame indices. fixed_num_frames spreads
// min(N, T) picks evenly with index_i = floor(i * (T - 1) / (N - 1));
// fixed_stride returns 0, k, 2k, ... below T.
// Throws InvalidPlan for a missing or zero mode parameter.
std::vector<std::size_t> sample_frames(std::size_t total_frames,
                                       const FrameSamplingPlan& plan);

// ---------------------------------------------------------------------------
// Alignment

// Similarity transform p -> s * R(theta) * p + t, stored as a 2x3 matrix.
struct AlignmentTransform {
  cv::Matx23d matrix = cv::Matx23d(1, 0, 0, 0, 1, 0);

  double scale() const;
  double rotation() const;  // radians
  cv::Point2d translation() const { return {matrix(0, 2), matrix(1, 2)}; }
  cv::Point2d apply(const cv::Point2d& p) const;

  static AlignmentTransform from_params(double scale, double theta, cv::Point2d t);
  AlignmentTransform inverse() const;
  // (this * other)(p) == this(other(p))
  AlignmentTransform compose(const AlignmentTransform& other) const;
};

// Least-squares similarity (Umeyama) mapping `source` onto `target`.
// Throws DegenerateLandmarks when the source points have zero spread or the
// spans differ in length or hold fewer than two points.
AlignmentTransform estimate_alignment(std::span<const cv::Point2d> source,
                                      std::span<const cv::Point2d> target);

// Fits on the five-point subset (eye centers, nose tip, mouth corners).
AlignmentTransform estimate_alignment(const LandmarkSet& landmarks,
                                      const LandmarkSet& face_template);

double alignment_residual(const AlignmentTransform& t,
                          std::span<const cv::Point2d> source,
                          std::span<const cv::Point2d> target);

// ---------------------------------------------------------------------------
// Cropping

struct CropSpec {
  double margin = 1.3;
  int output_size = 256;

  void validate() const;
};

// Everything needed to replay a crop on a co-registered image (the mask).
struct CropGeometry {
  cv::Size source_size;
  // Source pixel coordinates to output pixel coordinates.
  cv::Matx23d source_to_output;
  // Square crop box in aligned space, after margin expansion.
  cv::Rect2d box;
  double side_before_margin = 0;
};

struct CropResult {
  cv::Mat face;
  LandmarkSet landmarks;  // in output pixel coordinates
  CropGeometry geometry;
};

// Aligns the frame, takes the square box around the warped landmarks,
// scales its side by spec.margin about its center, and resamples the box to
// output_size x output_size with bilinear interpolation. Samples outside the
// frame are black.
CropResult warp_crop(const cv::Mat& image, const LandmarkSet& landmarks,
                     const AlignmentTransform& transform, const CropSpec& spec);

// Replays a crop on a mask: nearest-neighbour resampling, then values >= 0.5
// of full scale become 255 and everything else 0. Output is CV_8UC1.
// Throws DimensionMismatch when the mask and frame sizes differ.
cv::Mat warp_mask(const cv::Mat& mask, const CropGeometry& geometry, const CropSpec& spec);

// ---------------------------------------------------------------------------
// Video processing

// Random-access view over a decoded video file or a directory of frames.
class FrameSource {
 public:
  // Throws DecodeFailure when `path` is neither a readable video nor a
  // directory containing images.
  static FrameSource open(const std::filesystem::path& path);

  std::size_t frame_count() const { return count_; }
  // Decodes the requested frames (sorted ascending) in one pass.
  std::vector<cv::Mat> read(std::span<const std::size_t> indices) const;

 private:
  std::filesystem::path path_;
  std::vector<std::filesystem::path> images_;  // empty for video files
  std::size_t count_ = 0;
};

using LandmarkProvider = std::function<const LandmarkSet*(std::size_t frame_index)>;

struct VideoJob {
  std::string video_id;
  std::filesystem::path source;
  std::optional<std::filesystem::path> mask_source;
  std::filesystem::path output_dir;  // receives frames/, landmarks/, masks/
};

struct ProcessedVideo {
  std::string video_id;
  std::size_t sampled = 0;
  std::vector<std::size_t> written;  // source frame indices with outputs
  std::size_t skipped_no_face = 0;
  std::size_t failed_frames = 0;
  bool has_masks = false;
};

// Aligns and crops every sampled frame that has a face, co-transforms the
// mask when one is supplied, and writes
//   <output_dir>/frames/NNNN.png, landmarks/NNNN.json, masks/NNNN.png,
// plus meta.json with the per-frame transforms. Any previous content of
// output_dir is removed first. Frame-level problems are logged and never
// abort the video; an unreadable source throws DecodeFailure.
ProcessedVideo process_video(const VideoJob& job, const FrameSamplingPlan& plan,
                             const CropSpec& spec, const LandmarkProvider& landmarks,
                             LogSink& log);

// ---------------------------------------------------------------------------
// Dataset-level driver

struct PreprocessConfig {
  std::string dataset_name;
  std::filesystem::path dataset_root_path;
  std::optional<std::string> comp;
  FrameSamplingPlan plan;
  CropSpec crop;
};

struct PreprocessSummary {
  std::vector<ProcessedVideo> videos;  // sorted by output path
  std::vector<std::string> failures;   // "<video>: <reason>"
};

// Every directory G below the root holding a videos/ folder is a video
// group. Entries of G/videos are video files or frame directories; their
// landmark tracks live in G/landmark_tracks/<id>.json and optional mask
// sources in G/mask_videos/<id>[.ext]. Outputs go to G/faces/<id>/.
std::vector<VideoJob> discover_video_jobs(const PreprocessConfig& config);

PreprocessSummary preprocess_dataset(const PreprocessConfig& config, unsigned workers,
                                     LogSink& log);

}  // namespace dfkit

#endif  // DFKIT_PREPROCESS_HPP_
