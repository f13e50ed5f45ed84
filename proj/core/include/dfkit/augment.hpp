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

#ifndef DFKIT_AUGMENT_HPP_
#define DFKIT_AUGMENT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <opencv2/core.hpp>

#include "dfkit/random.hpp"

namespace dfkit {

enum class AugmentKind {
  kHFlip,
  kRotate,
  kIsotropicResize,
  kBrightnessContrast,
  kFancyPca,
  kHsv,
  kJpegCompress,
  kGaussianBlur,
};

std::string_view to_string(AugmentKind kind);
std::optional<AugmentKind> parse_augment_kind(std::string_view name);

struct Interval {
  double lo = 0;
  double hi = 0;
};

struct HFlipParams {};
struct RotateParams {
  Interval degrees{-10, 10};
};
struct IsotropicResizeParams {
  int max_side = 256;
};
struct BrightnessContrastParams {
  Interval brightness{-0.1, 0.1};  // additive, fraction of full scale
  Interval contrast{-0.1, 0.1};    // gain is 1 + delta
};
struct FancyPcaParams {
  double alpha_std = 0.1;
};
struct HsvParams {
  Interval hue_degrees{-10, 10};
  Interval saturation{-0.1, 0.1};  // relative
  Interval value{-0.1, 0.1};       // relative
};
struct JpegParams {
  int quality_lower = 40;
  int quality_upper = 100;
};
struct BlurParams {
  int kernel_lower = 3;  // odd kernel sizes within [lower, upper]
  int kernel_upper = 7;
};

// Alternative order matches AugmentKind.
using AugmentParams = std::variant<HFlipParams, RotateParams, IsotropicResizeParams,
                                   BrightnessContrastParams, FancyPcaParams, HsvParams,
                                   JpegParams, BlurParams>;

struct AugmentOp {
  AugmentParams params;
  double probability = 0.5;

  AugmentKind kind() const { return static_cast<AugmentKind>(params.index()); }
  // Default ranges and probability for one kind.
  static AugmentOp defaults(AugmentKind kind);
  // Throws InvalidArgument for a probability outside [0, 1] or an empty range.
  void validate() const;
};

// What one op did to one image.
struct AppliedOp {
  AugmentKind kind;
  bool fired = false;
  std::map<std::string, double> params;

  friend bool operator==(const AppliedOp&, const AppliedOp&) = default;
};
using AppliedLog = std::vector<AppliedOp>;

// Draws the fire decision, then (only when firing) the parameters, from
// `rng`. Images must be CV_8U with 1 or 3 channels; fancy_pca and hsv need
// 3 channels. Throws UnsupportedImageDepth otherwise.
cv::Mat apply(const AugmentOp& op, const cv::Mat& image, KeyedRng& rng,
              AppliedOp* record = nullptr);

struct AugmentPipeline {
  std::vector<AugmentOp> ops;
  std::uint64_t seed = 0;

  // hflip, rotate, gaussian_blur, isotropic_resize, brightness_contrast,
  // fancy_pca, hsv, jpeg_compress with their default settings.
  static AugmentPipeline standard(std::uint64_t seed);
  void validate() const;
};

// Op k of image i draws from KeyedRng(seed, {i, k}), so the result depends
// only on (seed, image_index, image).
std::pair<cv::Mat, AppliedLog> apply_pipeline(const AugmentPipeline& pipeline,
                                              const cv::Mat& image,
                                              std::uint64_t image_index = 0);

}  // namespace dfkit

#endif  // DFKIT_AUGMENT_HPP_
