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
#include <cmath>

#include <opencv2/imgproc.hpp>

#include "dfkit/error.hpp"
#include "dfkit/preprocess.hpp"

namespace dfkit {

double AlignmentTransform::scale() const { return std::hypot(matrix(0, 0), matrix(1, 0)); }

double AlignmentTransform::rotation() const { return std::atan2(matrix(1, 0), matrix(0, 0)); }

cv::Point2d AlignmentTransform::apply(const cv::Point2d& p) const {
  return {matrix(0, 0) * p.x + matrix(0, 1) * p.y + matrix(0, 2),
          matrix(1, 0) * p.x + matrix(1, 1) * p.y + matrix(1, 2)};
}

AlignmentTransform AlignmentTransform::from_params(double scale, double theta, cv::Point2d t) {
  const double c = scale * std::cos(theta);
  const double s = scale * std::sin(theta);
  return {cv::Matx23d(c, -s, t.x, s, c, t.y)};
}

AlignmentTransform AlignmentTransform::inverse() const {
  cv::Matx23d inv;
  cv::invertAffineTransform(matrix, inv);
  return {inv};
}

AlignmentTransform AlignmentTransform::compose(const AlignmentTransform& other) const {
  const cv::Matx33d a(matrix(0, 0), matrix(0, 1), matrix(0, 2),
                      matrix(1, 0), matrix(1, 1), matrix(1, 2), 0, 0, 1);
  const cv::Matx23d& o = other.matrix;
  const cv::Matx33d b(o(0, 0), o(0, 1), o(0, 2), o(1, 0), o(1, 1), o(1, 2), 0, 0, 1);
  const cv::Matx33d c = a * b;
  return {cv::Matx23d(c(0, 0), c(0, 1), c(0, 2), c(1, 0), c(1, 1), c(1, 2))};
}

// Closed-form 2-D Umeyama: with centered points written as complex numbers,
// the optimal s*e^{i*theta} is sum(conj(x) * y) / sum(|x|^2).
AlignmentTransform estimate_alignment(std::span<const cv::Point2d> source,
                                      std::span<const cv::Point2d> target) {
  if (source.size() != target.size() || source.size() < 2) {
    throw Error(ErrorCode::kDegenerateLandmarks, "need two or more corresponding points");
  }
  const double n = static_cast<double>(source.size());
  cv::Point2d mx(0, 0), my(0, 0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    mx += source[i];
    my += target[i];
  }
  mx *= 1.0 / n;
  my *= 1.0 / n;

  double sxx = 0, dot = 0, cross = 0, extent = 0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const cv::Point2d x = source[i] - mx;
    const cv::Point2d y = target[i] - my;
    sxx += x.dot(x);
    dot += x.dot(y);
    cross += x.x * y.y - x.y * y.x;
    extent = std::max({extent, std::abs(source[i].x), std::abs(source[i].y)});
  }
  if (!(sxx > n * 1e-20 * std::max(1.0, extent * extent))) {
    throw Error(ErrorCode::kDegenerateLandmarks, "source landmarks have zero spread");
  }
  const double a = dot / sxx;    // s cos(theta)
  const double b = cross / sxx;  // s sin(theta)
  const double tx = my.x - (a * mx.x - b * mx.y);
  const double ty = my.y - (b * mx.x + a * mx.y);
  return {cv::Matx23d(a, -b, tx, b, a, ty)};
}

AlignmentTransform estimate_alignment(const LandmarkSet& landmarks, const LandmarkSet& face_template) {
  const auto src = landmarks.five_point_subset();
  const auto dst = face_template.five_point_subset();
  return estimate_alignment(std::span<const cv::Point2d>(src), std::span<const cv::Point2d>(dst));
}

double alignment_residual(const AlignmentTransform& t, std::span<const cv::Point2d> source,
                          std::span<const cv::Point2d> target) {
  double sum = 0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const cv::Point2d d = t.apply(source[i]) - target[i];
    sum += d.dot(d);
  }
  return sum;
}

void CropSpec::validate() const {
  if (!(margin >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "margin must be >= 1.0");
  if (output_size <= 0) throw Error(ErrorCode::kInvalidArgument, "output_size must be > 0");
}

// Output pixel u samples aligned coordinate q at u = k * (q - box.x) - 0.5,
// pixel centers sitting on integers. With an identity transform and a box
// equal to the frame's outer edges this is cv::resize's sampling grid.
CropResult warp_crop(const cv::Mat& image, const LandmarkSet& landmarks,
                     const AlignmentTransform& transform, const CropSpec& spec) {
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "empty frame");
  spec.validate();
  if (!(transform.scale() > 0) || !std::isfinite(transform.scale())) {
    throw Error(ErrorCode::kInvalidArgument, "alignment scale must be positive");
  }

  const LandmarkSet aligned = landmarks.transformed(transform.matrix);
  const cv::Rect2d bounds = aligned.bounds();
  const double side = std::max(bounds.width, bounds.height);
  if (!(side > 0)) throw Error(ErrorCode::kDegenerateLandmarks, "landmarks span no area");
  const double expanded = side * spec.margin;
  const cv::Point2d center(bounds.x + bounds.width / 2, bounds.y + bounds.height / 2);
  const cv::Rect2d box(center.x - expanded / 2, center.y - expanded / 2, expanded, expanded);

  const double k = spec.output_size / expanded;
  const cv::Matx23d& a = transform.matrix;
  const cv::Matx23d m(k * a(0, 0), k * a(0, 1), k * (a(0, 2) - box.x) - 0.5,
                      k * a(1, 0), k * a(1, 1), k * (a(1, 2) - box.y) - 0.5);

  CropResult out;
  cv::warpAffine(image, out.face, m, cv::Size(spec.output_size, spec.output_size),
                 cv::INTER_LINEAR, cv::BORDER_CONSTANT, cv::Scalar::all(0));
  out.landmarks = landmarks.transformed(m);
  out.geometry = {image.size(), m, box, side};
  return out;
}

cv::Mat warp_mask(const cv::Mat& mask, const CropGeometry& geometry, const CropSpec& spec) {
  if (mask.size() != geometry.source_size) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask is " + std::to_string(mask.cols) + "x" + std::to_string(mask.rows) +
                    ", frame is " + std::to_string(geometry.source_size.width) + "x" +
                    std::to_string(geometry.source_size.height));
  }
  cv::Mat gray = mask;
  if (mask.channels() == 3) {
    cv::cvtColor(mask, gray, cv::COLOR_BGR2GRAY);
  } else if (mask.channels() != 1) {
    throw Error(ErrorCode::kUnsupportedImageDepth, "mask must have 1 or 3 channels");
  }
  double full_scale = 1.0;
  switch (gray.depth()) {
    case CV_8U: full_scale = 255.0; break;
    case CV_16U: full_scale = 65535.0; break;
    case CV_32F:
    case CV_64F: break;
    default: throw Error(ErrorCode::kUnsupportedImageDepth, "unsupported mask depth");
  }
  cv::Mat normalized;
  gray.convertTo(normalized, CV_32F, 1.0 / full_scale);

  cv::Mat warped;
  cv::warpAffine(normalized, warped, geometry.source_to_output,
                 cv::Size(spec.output_size, spec.output_size), cv::INTER_NEAREST,
                 cv::BORDER_CONSTANT, cv::Scalar::all(0));
  cv::Mat binary = warped >= 0.5f;  // 0 or 255, CV_8U
  return binary;
}

}  // namespace dfkit
