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

#ifndef DFKIT_SYNTHESIS_HPP_
#define DFKIT_SYNTHESIS_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include <opencv2/core.hpp>

#include "dfkit/landmarks.hpp"
#include "dfkit/random.hpp"

namespace dfkit {

// Per-pixel blend weights in [0, 1], stored as CV_64FC1.
class BlendMask {
 public:
  BlendMask() = default;
  // Throws InvalidArgument unless `values` is single-channel CV_64F in [0, 1].
  explicit BlendMask(cv::Mat values);
  static BlendMask filled(cv::Size size, double value);

  const cv::Mat& values() const noexcept { return values_; }
  cv::Size size() const { return values_.size(); }
  double at(int row, int col) const { return values_.at<double>(row, col); }

 private:
  cv::Mat values_;
};

inline constexpr std::array<double, 7> kFwaScales = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};

struct BlendRecipe {
  double feather_sigma = 7.0;   // pixels
  double jitter_scale = 0.05;   // affine scale jitter, +/- fraction
  double jitter_shift = 3.0;    // affine translation jitter, +/- pixels
  double fwa_scale = 0.5;       // one of kFwaScales
  std::uint64_t seed = 0;

  void validate() const;
};

// Draws fwa_scale uniformly from kFwaScales; other fields come from `base`.
BlendRecipe draw_recipe(const BlendRecipe& base, KeyedRng& rng);

// Filled convex hull of the 68 landmarks: a pixel is 1 when its center lies
// inside or on the hull. Throws DegenerateLandmarks for a collinear hull.
BlendMask hull_mask(const LandmarkSet& landmarks, cv::Size size);

// Seeded affine jitter about the mask centroid followed by Gaussian
// feathering. Randomness comes only from recipe.seed.
BlendMask deform_feather(const BlendMask& mask, const BlendRecipe& recipe);

// out = M * foreground + (1 - M) * background per channel, rounded to the
// storage depth. Throws DimensionMismatch.
cv::Mat blend(const cv::Mat& foreground, const cv::Mat& background, const BlendMask& mask);

// B = 4 * M * (1 - M), CV_64FC1.
cv::Mat boundary_map(const BlendMask& mask);

// Shifts each channel of `source` to the mean and standard deviation of
// `reference`, both measured where mask > 0. Returns source unchanged when
// the mask is empty.
cv::Mat match_color(const cv::Mat& source, const cv::Mat& reference, const BlendMask& mask);

struct SynthesisResult {
  cv::Mat forged;
  BlendMask mask;
  cv::Mat boundary;
};

// Face-warping artifacts: the face is downscaled by recipe.fwa_scale,
// smoothed, upscaled back, colour matched, and blended inside the deformed
// and feathered landmark hull. Pixels where the mask is 0 keep their input
// value bit for bit.
SynthesisResult fwa_generate(const cv::Mat& face, const LandmarkSet& landmarks,
                             const BlendRecipe& recipe);

// Blended composite: `donor` is similarity-aligned onto `target` via the
// landmarks, colour matched, then blended into `target` inside the deformed
// hull of the target landmarks.
SynthesisResult xray_generate(const cv::Mat& target, const LandmarkSet& target_landmarks,
                              const cv::Mat& donor, const LandmarkSet& donor_landmarks,
                              const BlendRecipe& recipe);

// Seeded stream of blended composites over a pool of real faces. Sample i
// picks its target from KeyedRng(seed, {i}) and its donor among the
// `neighbours` nearest landmark configurations, so any sample can be
// regenerated independently of the others.
class XrayStream {
 public:
  struct Face {
    cv::Mat image;
    LandmarkSet landmarks;
  };
  struct Sample {
    std::size_t target = 0;
    std::size_t donor = 0;
    BlendRecipe recipe;
    SynthesisResult result;
  };

  XrayStream(std::vector<Face> pool, BlendRecipe base, std::size_t neighbours = 5);

  Sample generate(std::size_t sample_index) const;
  // Donor candidates for a target, nearest first.
  const std::vector<std::size_t>& neighbours_of(std::size_t target) const {
    return neighbours_[target];
  }
  std::size_t pool_size() const { return pool_.size(); }

 private:
  std::vector<Face> pool_;
  BlendRecipe base_;
  std::vector<std::vector<std::size_t>> neighbours_;
};

}  // namespace dfkit

#endif  // DFKIT_SYNTHESIS_HPP_
