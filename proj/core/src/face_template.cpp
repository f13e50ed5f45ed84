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

#include <array>
#include <cmath>
#include <numbers>

#include "dfkit/landmarks.hpp"

namespace dfkit {
namespace {

// Mean-face layout in a unit square, x to the right and y downwards.
// Jaw points lie on an elliptical arc; the remaining groups are tabulated.
// Bump the version string whenever a coordinate changes.
constexpr std::string_view kTemplateVersion = "mean-face-68/v1";

const std::array<cv::Point2d, 51> kInnerFace = {{
    // brows 17-26
    {0.12, 0.12}, {0.19, 0.08}, {0.27, 0.07}, {0.35, 0.08}, {0.42, 0.11},
    {0.58, 0.11}, {0.65, 0.08}, {0.73, 0.07}, {0.81, 0.08}, {0.88, 0.12},
    // nose bridge 27-30
    {0.50, 0.22}, {0.50, 0.32}, {0.50, 0.42}, {0.50, 0.52},
    // nostrils 31-35
    {0.40, 0.60}, {0.45, 0.62}, {0.50, 0.63}, {0.55, 0.62}, {0.60, 0.60},
    // left eye 36-41
    {0.21, 0.25}, {0.26, 0.22}, {0.32, 0.22}, {0.37, 0.25}, {0.32, 0.27}, {0.26, 0.27},
    // right eye 42-47
    {0.63, 0.25}, {0.68, 0.22}, {0.74, 0.22}, {0.79, 0.25}, {0.74, 0.27}, {0.68, 0.27},
    // outer lip 48-59
    {0.35, 0.78}, {0.40, 0.75}, {0.45, 0.73}, {0.50, 0.74}, {0.55, 0.73}, {0.60, 0.75},
    {0.65, 0.78}, {0.60, 0.82}, {0.55, 0.84}, {0.50, 0.85}, {0.45, 0.84}, {0.40, 0.82},
    // inner lip 60-67
    {0.37, 0.78}, {0.45, 0.77}, {0.50, 0.775}, {0.55, 0.77},
    {0.63, 0.78}, {0.55, 0.79}, {0.50, 0.795}, {0.45, 0.79},
}};

LandmarkSet::Points unit_template() {
  LandmarkSet::Points pts{};
  for (int k = 0; k <= 16; ++k) {
    const double t = std::numbers::pi - k * std::numbers::pi / 16.0;
    pts[k] = {0.5 + 0.5 * std::cos(t), 0.2 + 0.8 * std::sin(t)};
  }
  for (std::size_t i = 0; i < kInnerFace.size(); ++i) pts[17 + i] = kInnerFace[i];
  return pts;
}

}  // namespace

LandmarkSet face_template(double side) {
  static const LandmarkSet::Points unit = unit_template();
  LandmarkSet::Points scaled;
  for (std::size_t i = 0; i < kLandmarkCount; ++i) scaled[i] = unit[i] * side;
  return LandmarkSet(scaled);
}

std::string_view face_template_version() { return kTemplateVersion; }

}  // namespace dfkit
