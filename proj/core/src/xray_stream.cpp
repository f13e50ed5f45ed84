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
#include <numeric>

#include "dfkit/error.hpp"
#include "dfkit/synthesis.hpp"

namespace dfkit {
namespace {

// Landmarks with translation and scale removed, so the distance compares
// pose and expression rather than framing.
std::array<cv::Point2d, kLandmarkCount> normalized_shape(const LandmarkSet& set) {
  cv::Point2d mean(0, 0);
  for (const auto& p : set.points()) mean += p;
  mean *= 1.0 / kLandmarkCount;
  double rms = 0;
  for (const auto& p : set.points()) rms += (p - mean).dot(p - mean);
  rms = std::sqrt(rms / kLandmarkCount);
  std::array<cv::Point2d, kLandmarkCount> out;
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    out[i] = rms > 0 ? (set[i] - mean) * (1.0 / rms) : cv::Point2d(0, 0);
  }
  return out;
}

}  // namespace

XrayStream::XrayStream(std::vector<Face> pool, BlendRecipe base, std::size_t neighbours)
    : pool_(std::move(pool)), base_(base) {
  if (pool_.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two real faces");
  base_.validate();
  const std::size_t k = std::clamp<std::size_t>(neighbours, 1, pool_.size() - 1);

  std::vector<std::array<cv::Point2d, kLandmarkCount>> shapes;
  shapes.reserve(pool_.size());
  for (const auto& f : pool_) shapes.push_back(normalized_shape(f.landmarks));

  neighbours_.resize(pool_.size());
  for (std::size_t t = 0; t < pool_.size(); ++t) {
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t j = 0; j < pool_.size(); ++j) {
      if (j == t) continue;
      double d = 0;
      for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        const cv::Point2d diff = shapes[t][i] - shapes[j][i];
        d += diff.dot(diff);
      }
      dist.emplace_back(d, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    for (std::size_t i = 0; i < k; ++i) neighbours_[t].push_back(dist[i].second);
  }
}

XrayStream::Sample XrayStream::generate(std::size_t sample_index) const {
  KeyedRng rng(base_.seed, {sample_index});
  Sample s;
  s.target = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool_.size()) - 1));
  const auto& candidates = neighbours_[s.target];
  s.donor = candidates[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1))];
  s.recipe = draw_recipe(base_, rng);
  s.recipe.seed = derive_key(base_.seed, {sample_index, 1});
  const Face& target = pool_[s.target];
  const Face& donor = pool_[s.donor];
  s.result = xray_generate(target.image, target.landmarks, donor.image, donor.landmarks, s.recipe);
  return s;
}

}  // namespace dfkit
