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

#include "dfkit/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include <opencv2/imgproc.hpp>

#include "dfkit/error.hpp"
#include "dfkit/preprocess.hpp"

namespace dfkit {
namespace {

// Stream ids under a recipe seed.
constexpr std::uint64_t kJitterStream = 1;

double orient(const cv::Point2d& a, const cv::Point2d& b, const cv::Point2d& p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

// Andrew's monotone chain; counter-clockwise in a y-up frame, collinear
// points dropped.
std::vector<cv::Point2d> convex_hull(std::span<const cv::Point2d> input) {
  std::vector<cv::Point2d> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const cv::Point2d& a, const cv::Point2d& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<cv::Point2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool inside_hull(const std::vector<cv::Point2d>& hull, const cv::Point2d& p) {
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (orient(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
  }
  return true;
}

void require_same_size(const cv::Mat& a, const cv::Mat& b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(a.cols) + "x" + std::to_string(a.rows) +
                    " vs " + std::to_string(b.cols) + "x" + std::to_string(b.rows));
  }
}

}  // namespace

BlendMask::BlendMask(cv::Mat values) : values_(std::move(values)) {
  if (values_.type() != CV_64FC1) {
    throw Error(ErrorCode::kInvalidArgument, "blend mask must be CV_64FC1");
  }
  double lo = 0, hi = 0;
  if (!values_.empty()) cv::minMaxLoc(values_, &lo, &hi);
  if (lo < 0.0 || hi > 1.0 || std::isnan(lo) || std::isnan(hi)) {
    throw Error(ErrorCode::kInvalidArgument, "blend mask values must lie in [0, 1]");
  }
}

BlendMask BlendMask::filled(cv::Size size, double value) {
  return BlendMask(cv::Mat(size, CV_64FC1, cv::Scalar(value)));
}

void BlendRecipe::validate() const {
  if (!(feather_sigma > 0)) throw Error(ErrorCode::kInvalidArgument, "feather_sigma must be > 0");
  if (!(jitter_scale >= 0 && jitter_scale < 1) || !(jitter_shift >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "jitter magnitudes must be non-negative");
  }
  if (std::find(kFwaScales.begin(), kFwaScales.end(), fwa_scale) == kFwaScales.end()) {
    throw Error(ErrorCode::kInvalidArgument, "fwa_scale must be one of 0.2 .. 0.8");
  }
}

BlendRecipe draw_recipe(const BlendRecipe& base, KeyedRng& rng) {
  BlendRecipe r = base;
  r.fwa_scale = kFwaScales[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(kFwaScales.size()) - 1))];
  return r;
}

BlendMask hull_mask(const LandmarkSet& landmarks, cv::Size size) {
  const auto& pts = landmarks.points();
  const std::vector<cv::Point2d> hull = convex_hull(pts);
  double area2 = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area2 += a.x * b.y - a.y * b.x;
  }
  if (hull.size() < 3 || !(area2 > 0)) {
    throw Error(ErrorCode::kDegenerateLandmarks, "landmark hull has no area");
  }

  cv::Mat values(size, CV_64FC1, cv::Scalar(0));
  const cv::Rect2d b = landmarks.bounds();
  const int y0 = std::max(0, static_cast<int>(std::ceil(b.y)));
  const int y1 = std::min(size.height - 1, static_cast<int>(std::floor(b.y + b.height)));
  for (int y = y0; y <= y1; ++y) {
    // Row interval from edge crossings, then snapped with exact tests.
    double left = b.x + b.width, right = b.x;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto& p = hull[i];
      const auto& q = hull[(i + 1) % hull.size()];
      if ((p.y <= y && q.y >= y) || (q.y <= y && p.y >= y)) {
        if (p.y == q.y) {
          left = std::min({left, p.x, q.x});
          right = std::max({right, p.x, q.x});
        } else {
          const double x = p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y);
          left = std::min(left, x);
          right = std::max(right, x);
        }
      }
    }
    if (left > right) continue;
    int xl = static_cast<int>(std::ceil(left));
    int xr = static_cast<int>(std::floor(right));
    if (inside_hull(hull, {xl - 1.0, double(y)})) --xl;
    if (!inside_hull(hull, {double(xl), double(y)})) ++xl;
    if (inside_hull(hull, {xr + 1.0, double(y)})) ++xr;
    if (!inside_hull(hull, {double(xr), double(y)})) --xr;
    xl = std::max(xl, 0);
    xr = std::min(xr, size.width - 1);
    auto* row = values.ptr<double>(y);
    for (int x = xl; x <= xr; ++x) row[x] = 1.0;
  }
  return BlendMask(values);
}

BlendMask deform_feather(const BlendMask& mask, const BlendRecipe& recipe) {
  if (!(recipe.feather_sigma > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "feather_sigma must be > 0");
  }
  KeyedRng rng(recipe.seed, {kJitterStream});
  const double s = 1.0 + rng.uniform(-recipe.jitter_scale, recipe.jitter_scale);
  const double tx = rng.uniform(-recipe.jitter_shift, recipe.jitter_shift);
  const double ty = rng.uniform(-recipe.jitter_shift, recipe.jitter_shift);

  cv::Mat jittered;
  if (s == 1.0 && tx == 0.0 && ty == 0.0) {
    jittered = mask.values();
  } else {
    const cv::Moments mo = cv::moments(mask.values());
    const cv::Point2d c = mo.m00 > 0 ? cv::Point2d(mo.m10 / mo.m00, mo.m01 / mo.m00)
                                     : cv::Point2d(mask.size().width / 2.0, mask.size().height / 2.0);
    const cv::Matx23d m(s, 0, c.x * (1 - s) + tx, 0, s, c.y * (1 - s) + ty);
    cv::warpAffine(mask.values(), jittered, m, mask.size(), cv::INTER_NEAREST,
                   cv::BORDER_CONSTANT, cv::Scalar(0));
  }

  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * recipe.feather_sigma)));
  cv::Mat feathered;
  cv::GaussianBlur(jittered, feathered, cv::Size(2 * radius + 1, 2 * radius + 1),
                   recipe.feather_sigma, recipe.feather_sigma, cv::BORDER_CONSTANT);
  cv::min(cv::max(feathered, 0.0), 1.0, feathered);
  return BlendMask(feathered);
}

cv::Mat blend(const cv::Mat& foreground, const cv::Mat& background, const BlendMask& mask) {
  require_same_size(foreground, background, "blend images");
  require_same_size(foreground, mask.values(), "blend mask");
  if (foreground.type() != background.type()) {
    throw Error(ErrorCode::kDimensionMismatch, "foreground and background types differ");
  }
  const int channels = foreground.channels();
  cv::Mat fg, bg;
  foreground.convertTo(fg, CV_64F);
  background.convertTo(bg, CV_64F);
  cv::Mat out(fg.size(), fg.type());
  for (int y = 0; y < fg.rows; ++y) {
    const double* f = fg.ptr<double>(y);
    const double* g = bg.ptr<double>(y);
    const double* m = mask.values().ptr<double>(y);
    double* o = out.ptr<double>(y);
    for (int x = 0; x < fg.cols; ++x) {
      for (int c = 0; c < channels; ++c) {
        const int i = x * channels + c;
        o[i] = m[x] * f[i] + (1.0 - m[x]) * g[i];
      }
    }
  }
  cv::Mat result;
  out.convertTo(result, foreground.type());
  return result;
}

cv::Mat boundary_map(const BlendMask& mask) {
  cv::Mat out(mask.size(), CV_64FC1);
  for (int y = 0; y < out.rows; ++y) {
    const double* m = mask.values().ptr<double>(y);
    double* o = out.ptr<double>(y);
    for (int x = 0; x < out.cols; ++x) o[x] = (4.0 * m[x]) * (1.0 - m[x]);
  }
  return out;
}

cv::Mat match_color(const cv::Mat& source, const cv::Mat& reference, const BlendMask& mask) {
  require_same_size(source, reference, "colour match images");
  require_same_size(source, mask.values(), "colour match mask");
  const cv::Mat region = mask.values() > 0.0;
  if (cv::countNonZero(region) == 0) return source.clone();
  cv::Scalar ms, ss, mr, sr;
  cv::meanStdDev(source, ms, ss, region);
  cv::meanStdDev(reference, mr, sr, region);
  cv::Mat src;
  source.convertTo(src, CV_64F);
  std::vector<cv::Mat> planes;
  cv::split(src, planes);
  for (std::size_t c = 0; c < planes.size(); ++c) {
    const double gain = ss[c] > 1e-12 ? sr[c] / ss[c] : 1.0;
    planes[c] = (planes[c] - ms[c]) * gain + mr[c];
  }
  cv::merge(planes, src);
  cv::Mat out;
  src.convertTo(out, source.type());
  return out;
}

SynthesisResult fwa_generate(const cv::Mat& face, const LandmarkSet& landmarks,
                             const BlendRecipe& recipe) {
  if (face.empty()) throw Error(ErrorCode::kInvalidArgument, "empty face");
  recipe.validate();
  const BlendMask mask = deform_feather(hull_mask(landmarks, face.size()), recipe);

  const cv::Size small(std::max(1, static_cast<int>(std::lround(face.cols * recipe.fwa_scale))),
                       std::max(1, static_cast<int>(std::lround(face.rows * recipe.fwa_scale))));
  cv::Mat shrunk, warped;
  cv::resize(face, shrunk, small, 0, 0, cv::INTER_LINEAR);
  cv::GaussianBlur(shrunk, shrunk, cv::Size(5, 5), 0);
  cv::resize(shrunk, warped, face.size(), 0, 0, cv::INTER_LINEAR);

  const cv::Mat foreground = match_color(warped, face, mask);
  return {blend(foreground, face, mask), mask, boundary_map(mask)};
}

SynthesisResult xray_generate(const cv::Mat& target, const LandmarkSet& target_landmarks,
                              const cv::Mat& donor, const LandmarkSet& donor_landmarks,
                              const BlendRecipe& recipe) {
  if (target.empty() || donor.empty()) throw Error(ErrorCode::kInvalidArgument, "empty face");
  if (target.type() != donor.type()) {
    throw Error(ErrorCode::kDimensionMismatch, "target and donor types differ");
  }
  const AlignmentTransform to_target = estimate_alignment(
      std::span<const cv::Point2d>(donor_landmarks.points()),
      std::span<const cv::Point2d>(target_landmarks.points()));

  cv::Mat aligned;
  cv::warpAffine(donor, aligned, to_target.matrix, target.size(), cv::INTER_LINEAR, cv::BORDER_REFLECT);
  const BlendMask mask = deform_feather(hull_mask(target_landmarks, target.size()), recipe);
  const cv::Mat foreground = match_color(aligned, target, mask);
  return {blend(foreground, target, mask), mask, boundary_map(mask)};
}

}  // namespace dfkit
