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

#include "dfkit/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dfkit/error.hpp"
#include "json.hpp"

namespace dfkit {
namespace {

using nlohmann::json;

json points_to_json(const LandmarkSet& set) {
  json arr = json::array();
  for (const auto& p : set.points()) arr.push_back({p.x, p.y});
  return arr;
}

LandmarkSet points_from_json(const json& arr) {
  if (!arr.is_array() || arr.size() != kLandmarkCount) {
    throw Error(ErrorCode::kParseError, "expected an array of 68 [x, y] pairs");
  }
  LandmarkSet::Points pts;
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    const json& p = arr[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw Error(ErrorCode::kParseError, "landmark " + std::to_string(i) + " is not [x, y]");
    }
    pts[i] = {p[0].get<double>(), p[1].get<double>()};
  }
  return LandmarkSet(pts);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

LandmarkSet::LandmarkSet(const Points& points) : points_(points) {
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kDegenerateLandmarks, "non-finite landmark coordinate");
    }
  }
}

LandmarkSet LandmarkSet::from_span(std::span<const cv::Point2d> points) {
  if (points.size() != kLandmarkCount) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected 68 landmarks, got " + std::to_string(points.size()));
  }
  Points pts;
  std::copy(points.begin(), points.end(), pts.begin());
  return LandmarkSet(pts);
}

cv::Rect2d LandmarkSet::bounds() const {
  double x0 = points_[0].x, x1 = x0, y0 = points_[0].y, y1 = y0;
  for (const auto& p : points_) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

double LandmarkSet::bbox_area() const {
  const auto b = bounds();
  return b.width * b.height;
}

std::array<cv::Point2d, 5> LandmarkSet::five_point_subset() const {
  auto mean = [this](std::size_t first, std::size_t last) {
    cv::Point2d acc(0, 0);
    for (std::size_t i = first; i <= last; ++i) acc += points_[i];
    return acc * (1.0 / static_cast<double>(last - first + 1));
  };
  return {mean(36, 41), mean(42, 47), points_[30], points_[48], points_[54]};
}

LandmarkSet LandmarkSet::transformed(const cv::Matx23d& m) const {
  Points out;
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    const auto& p = points_[i];
    out[i] = {m(0, 0) * p.x + m(0, 1) * p.y + m(0, 2),
              m(1, 0) * p.x + m(1, 1) * p.y + m(1, 2)};
  }
  return LandmarkSet(out);
}

std::string landmarks_to_json(const LandmarkSet& landmarks) {
  return points_to_json(landmarks).dump() + "\n";
}

LandmarkSet landmarks_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return points_from_json(doc);
}

void write_landmarks(const std::filesystem::path& path, const LandmarkSet& landmarks) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << landmarks_to_json(landmarks);
}

LandmarkSet read_landmarks(const std::filesystem::path& path) {
  return landmarks_from_json(slurp(path));
}

LandmarkTrack LandmarkTrack::load(const std::filesystem::path& path) {
  return parse(slurp(path));
}

LandmarkTrack LandmarkTrack::parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("frames") || !doc["frames"].is_object()) {
    throw Error(ErrorCode::kParseError, "landmark track needs a \"frames\" object");
  }
  LandmarkTrack track;
  for (const auto& [key, faces] : doc["frames"].items()) {
    std::size_t index = 0;
    try {
      std::size_t used = 0;
      index = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "frame key \"" + key + "\" is not an index");
    }
    if (!faces.is_array()) throw Error(ErrorCode::kParseError, "frame " + key + " is not a list");
    for (const auto& face : faces) track.add_face(index, points_from_json(face));
  }
  return track;
}

const LandmarkSet* LandmarkTrack::primary_face(std::size_t frame_index) const {
  if (frame_index >= frames_.size() || frames_[frame_index].empty()) return nullptr;
  const auto& faces = frames_[frame_index];
  // Ties keep the earliest listed face.
  const LandmarkSet* best = &faces.front();
  for (const auto& f : faces) {
    if (f.bbox_area() > best->bbox_area()) best = &f;
  }
  return best;
}

void LandmarkTrack::add_face(std::size_t frame_index, const LandmarkSet& face) {
  if (frames_.size() <= frame_index) frames_.resize(frame_index + 1);
  frames_[frame_index].push_back(face);
}

std::string LandmarkTrack::to_json() const {
  json frames = json::object();
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (frames_[i].empty()) continue;
    json faces = json::array();
    for (const auto& f : frames_[i]) faces.push_back(points_to_json(f));
    frames[std::to_string(i)] = std::move(faces);
  }
  return json{{"frames", frames}}.dump() + "\n";
}

}  // namespace dfkit
