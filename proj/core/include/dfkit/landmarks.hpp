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

#ifndef DFKIT_LANDMARKS_HPP_
#define DFKIT_LANDMARKS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/core.hpp>

namespace dfkit {

inline constexpr std::size_t kLandmarkCount = 68;

// 68-point facial landmarks in the iBUG/dlib ordering. Coordinates follow
// the OpenCV pixel convention: pixel (i, j) has its center at (i, j).
class LandmarkSet {
 public:
  using Points = std::array<cv::Point2d, kLandmarkCount>;

  LandmarkSet() = default;
  // Throws DegenerateLandmarks when any coordinate is not finite.
  explicit LandmarkSet(const Points& points);
  // Throws InvalidArgument unless exactly 68 points are supplied.
  static LandmarkSet from_span(std::span<const cv::Point2d> points);

  const Points& points() const noexcept { return points_; }
  const cv::Point2d& operator[](std::size_t i) const { return points_[i]; }

  // Axis-aligned bounding box [min, max] of all points.
  cv::Rect2d bounds() const;
  double bbox_area() const;

  // Eye centers, nose tip, and both mouth corners.
  std::array<cv::Point2d, 5> five_point_subset() const;

  // Applies a 2x3 affine (CV_64F) to every point.
  LandmarkSet transformed(const cv::Matx23d& m) const;

  friend bool operator==(const LandmarkSet&, const LandmarkSet&) = default;

 private:
  Points points_{};
};

// Mean-face template scaled into a `side`-pixel square.
LandmarkSet face_template(double side);
std::string_view face_template_version();

// One landmark file holds a JSON array of 68 [x, y] pairs.
std::string landmarks_to_json(const LandmarkSet& landmarks);
LandmarkSet landmarks_from_json(std::string_view text);
void write_landmarks(const std::filesystem::path& path, const LandmarkSet& landmarks);
LandmarkSet read_landmarks(const std::filesystem::path& path);

// Per-video landmark track for the landmark provider: JSON object
//   {"frames": {"<frame_index>": [[[x, y] x 68], ...one entry per face]}}
// Frames without an entry (or with an empty face list) have no face.
class LandmarkTrack {
 public:
  static LandmarkTrack load(const std::filesystem::path& path);
  static LandmarkTrack parse(std::string_view text);

  // Largest-bounding-box face in the frame, or nothing.
  const LandmarkSet* primary_face(std::size_t frame_index) const;
  void add_face(std::size_t frame_index, const LandmarkSet& face);
  std::string to_json() const;

 private:
  std::vector<std::vector<LandmarkSet>> frames_;
};

}  // namespace dfkit

#endif  // DFKIT_LANDMARKS_HPP_
