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

#include "dfkit/augment.hpp"

#include <array>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "dfkit/error.hpp"

namespace dfkit {
namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "hflip", "rotate", "isotropic_resize", "brightness_contrast",
    "fancy_pca", "hsv", "jpeg_compress", "gaussian_blur"};

constexpr std::array<int, 3> kResizeInterpolations = {cv::INTER_AREA, cv::INTER_CUBIC,
                                                      cv::INTER_LINEAR};

void check_interval(const Interval& r, std::string_view what) {
  if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " range is empty");
  }
}

void require_depth(const cv::Mat& image, bool needs_color) {
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "empty image");
  if (image.depth() != CV_8U || (image.channels() != 1 && image.channels() != 3)) {
    throw Error(ErrorCode::kUnsupportedImageDepth, "augmentations take 8-bit gray or BGR images");
  }
  if (needs_color && image.channels() != 3) {
    throw Error(ErrorCode::kUnsupportedImageDepth, "colour augmentation needs a 3-channel image");
  }
}

using Record = std::map<std::string, double>;

cv::Mat rotate(const cv::Mat& img, const RotateParams& p, KeyedRng& rng, Record& rec) {
  const double angle = rng.uniform(p.degrees.lo, p.degrees.hi);
  rec["angle"] = angle;
  if (angle == 0.0) return img.clone();
  const cv::Point2f center((img.cols - 1) / 2.0f, (img.rows - 1) / 2.0f);
  cv::Mat out;
  cv::warpAffine(img, out, cv::getRotationMatrix2D(center, angle, 1.0), img.size(),
                 cv::INTER_LINEAR, cv::BORDER_CONSTANT, cv::Scalar::all(0));
  return out;
}

cv::Mat isotropic_resize(const cv::Mat& img, const IsotropicResizeParams& p, KeyedRng& rng,
                         Record& rec) {
  const auto which = rng.uniform_int(0, kResizeInterpolations.size() - 1);
  rec["interpolation"] = static_cast<double>(which);
  const double scale = static_cast<double>(p.max_side) / std::max(img.cols, img.rows);
  const cv::Size size(std::max(1, static_cast<int>(std::lround(img.cols * scale))),
                      std::max(1, static_cast<int>(std::lround(img.rows * scale))));
  if (size == img.size()) return img.clone();
  cv::Mat out;
  cv::resize(img, out, size, 0, 0, kResizeInterpolations[static_cast<std::size_t>(which)]);
  return out;
}

cv::Mat brightness_contrast(const cv::Mat& img, const BrightnessContrastParams& p, KeyedRng& rng,
                            Record& rec) {
  const double db = rng.uniform(p.brightness.lo, p.brightness.hi);
  const double dc = rng.uniform(p.contrast.lo, p.contrast.hi);
  rec["brightness"] = db;
  rec["contrast"] = dc;
  cv::Mat out;
  img.convertTo(out, img.type(), 1.0 + dc, db * 255.0);
  return out;
}

// Krizhevsky-style colour jitter along the RGB principal components.
cv::Mat fancy_pca(const cv::Mat& img, const FancyPcaParams& p, KeyedRng& rng, Record& rec) {
  cv::Mat pixels;
  img.reshape(1, img.rows * img.cols).convertTo(pixels, CV_64F, 1.0 / 255.0);
  cv::Mat cov, mean;
  cv::calcCovarMatrix(pixels, cov, mean, cv::COVAR_NORMAL | cv::COVAR_ROWS | cv::COVAR_SCALE, CV_64F);
  cv::Mat eigenvalues, eigenvectors;
  cv::eigen(cov, eigenvalues, eigenvectors);  // rows of eigenvectors are components
  cv::Vec3d shift(0, 0, 0);
  for (int i = 0; i < 3; ++i) {
    const double alpha = rng.normal() * p.alpha_std;
    rec["alpha" + std::to_string(i)] = alpha;
    const double w = alpha * std::max(0.0, eigenvalues.at<double>(i));
    for (int c = 0; c < 3; ++c) shift[c] += w * eigenvectors.at<double>(i, c);
  }
  cv::Mat out;
  img.convertTo(out, CV_64FC3);
  out += cv::Scalar(shift[0] * 255.0, shift[1] * 255.0, shift[2] * 255.0);
  out.convertTo(out, CV_8UC3);
  return out;
}

cv::Mat hsv(const cv::Mat& img, const HsvParams& p, KeyedRng& rng, Record& rec) {
  const double dh = rng.uniform(p.hue_degrees.lo, p.hue_degrees.hi);
  const double ds = rng.uniform(p.saturation.lo, p.saturation.hi);
  const double dv = rng.uniform(p.value.lo, p.value.hi);
  rec["hue"] = dh;
  rec["saturation"] = ds;
  rec["value"] = dv;
  cv::Mat hsv_img;
  cv::cvtColor(img, hsv_img, cv::COLOR_BGR2HSV_FULL);
  std::vector<cv::Mat> planes;
  cv::split(hsv_img, planes);
  // Full-range hue: 256 steps per turn.
  const double hue_steps = dh / 360.0 * 256.0;
  cv::Mat hue;
  planes[0].convertTo(hue, CV_64F, 1.0, hue_steps);
  for (auto it = hue.begin<double>(); it != hue.end<double>(); ++it) {
    double h = std::fmod(std::round(*it), 256.0);
    *it = h < 0 ? h + 256.0 : h;
  }
  hue.convertTo(planes[0], CV_8U);
  planes[1].convertTo(planes[1], CV_8U, 1.0 + ds);
  planes[2].convertTo(planes[2], CV_8U, 1.0 + dv);
  cv::merge(planes, hsv_img);
  cv::Mat out;
  cv::cvtColor(hsv_img, out, cv::COLOR_HSV2BGR_FULL);
  return out;
}

cv::Mat jpeg(const cv::Mat& img, const JpegParams& p, KeyedRng& rng, Record& rec) {
  const int quality = static_cast<int>(rng.uniform_int(p.quality_lower, p.quality_upper));
  rec["quality"] = quality;
  std::vector<uchar> buffer;
  if (!cv::imencode(".jpg", img, buffer, {cv::IMWRITE_JPEG_QUALITY, quality})) {
    throw Error(ErrorCode::kIoError, "jpeg encode failed");
  }
  return cv::imdecode(buffer, img.channels() == 1 ? cv::IMREAD_GRAYSCALE : cv::IMREAD_COLOR);
}

cv::Mat gaussian_blur(const cv::Mat& img, const BlurParams& p, KeyedRng& rng, Record& rec) {
  const int lo = p.kernel_lower | 1;
  const int hi = (p.kernel_upper % 2 == 0) ? p.kernel_upper - 1 : p.kernel_upper;
  const int k = lo + 2 * static_cast<int>(rng.uniform_int(0, (hi - lo) / 2));
  rec["kernel"] = k;
  cv::Mat out;
  cv::GaussianBlur(img, out, cv::Size(k, k), 0);
  return out;
}

}  // namespace

std::string_view to_string(AugmentKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<AugmentKind> parse_augment_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<AugmentKind>(i);
  }
  return std::nullopt;
}

AugmentOp AugmentOp::defaults(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::kHFlip: return {HFlipParams{}, 0.5};
    case AugmentKind::kRotate: return {RotateParams{}, 0.5};
    case AugmentKind::kIsotropicResize: return {IsotropicResizeParams{}, 1.0};
    case AugmentKind::kBrightnessContrast: return {BrightnessContrastParams{}, 0.5};
    case AugmentKind::kFancyPca: return {FancyPcaParams{}, 0.5};
    case AugmentKind::kHsv: return {HsvParams{}, 0.5};
    case AugmentKind::kJpegCompress: return {JpegParams{}, 0.5};
    case AugmentKind::kGaussianBlur: return {BlurParams{}, 0.5};
  }
  return {HFlipParams{}, 0.5};
}

void AugmentOp::validate() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "probability must lie in [0, 1]");
  }
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RotateParams>) {
          check_interval(p.degrees, "rotate_limit");
        } else if constexpr (std::is_same_v<T, IsotropicResizeParams>) {
          if (p.max_side < 1) throw Error(ErrorCode::kInvalidArgument, "max_side must be >= 1");
        } else if constexpr (std::is_same_v<T, BrightnessContrastParams>) {
          check_interval(p.brightness, "brightness_limit");
          check_interval(p.contrast, "contrast_limit");
        } else if constexpr (std::is_same_v<T, FancyPcaParams>) {
          if (!(p.alpha_std >= 0)) throw Error(ErrorCode::kInvalidArgument, "alpha_std must be >= 0");
        } else if constexpr (std::is_same_v<T, HsvParams>) {
          check_interval(p.hue_degrees, "hue_shift_limit");
          check_interval(p.saturation, "sat_shift_limit");
          check_interval(p.value, "val_shift_limit");
        } else if constexpr (std::is_same_v<T, JpegParams>) {
          if (p.quality_lower < 0 || p.quality_upper > 100 || p.quality_lower > p.quality_upper) {
            throw Error(ErrorCode::kInvalidArgument, "quality limits must satisfy 0 <= lower <= upper <= 100");
          }
        } else if constexpr (std::is_same_v<T, BlurParams>) {
          if (p.kernel_lower < 1 || (p.kernel_lower | 1) > p.kernel_upper) {
            throw Error(ErrorCode::kInvalidArgument, "blur_limit must contain an odd kernel size");
          }
        }
      },
      params);
}

cv::Mat apply(const AugmentOp& op, const cv::Mat& image, KeyedRng& rng, AppliedOp* record) {
  const bool needs_color = op.kind() == AugmentKind::kFancyPca || op.kind() == AugmentKind::kHsv;
  require_depth(image, needs_color);
  AppliedOp local{op.kind(), false, {}};
  AppliedOp& rec = record ? *record : local;
  rec = {op.kind(), false, {}};
  if (!rng.bernoulli(op.probability)) return image.clone();
  rec.fired = true;
  return std::visit(
      [&](const auto& p) -> cv::Mat {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HFlipParams>) {
          cv::Mat out;
          cv::flip(image, out, 1);
          return out;
        } else if constexpr (std::is_same_v<T, RotateParams>) {
          return rotate(image, p, rng, rec.params);
        } else if constexpr (std::is_same_v<T, IsotropicResizeParams>) {
          return isotropic_resize(image, p, rng, rec.params);
        } else if constexpr (std::is_same_v<T, BrightnessContrastParams>) {
          return brightness_contrast(image, p, rng, rec.params);
        } else if constexpr (std::is_same_v<T, FancyPcaParams>) {
          return fancy_pca(image, p, rng, rec.params);
        } else if constexpr (std::is_same_v<T, HsvParams>) {
          return hsv(image, p, rng, rec.params);
        } else if constexpr (std::is_same_v<T, JpegParams>) {
          return jpeg(image, p, rng, rec.params);
        } else {
          return gaussian_blur(image, p, rng, rec.params);
        }
      },
      op.params);
}

AugmentPipeline AugmentPipeline::standard(std::uint64_t seed) {
  AugmentPipeline p;
  p.seed = seed;
  for (AugmentKind k : {AugmentKind::kHFlip, AugmentKind::kRotate, AugmentKind::kGaussianBlur,
                        AugmentKind::kIsotropicResize, AugmentKind::kBrightnessContrast,
                        AugmentKind::kFancyPca, AugmentKind::kHsv, AugmentKind::kJpegCompress}) {
    p.ops.push_back(AugmentOp::defaults(k));
  }
  return p;
}

void AugmentPipeline::validate() const {
  for (const auto& op : ops) op.validate();
}

std::pair<cv::Mat, AppliedLog> apply_pipeline(const AugmentPipeline& pipeline, const cv::Mat& image,
                                              std::uint64_t image_index) {
  pipeline.validate();
  cv::Mat current = image.clone();
  AppliedLog log;
  log.reserve(pipeline.ops.size());
  for (std::size_t k = 0; k < pipeline.ops.size(); ++k) {
    KeyedRng rng(pipeline.seed, {image_index, k});
    AppliedOp rec{pipeline.ops[k].kind(), false, {}};
    current = apply(pipeline.ops[k], current, rng, &rec);
    log.push_back(std::move(rec));
  }
  return {current, log};
}

}  // namespace dfkit
