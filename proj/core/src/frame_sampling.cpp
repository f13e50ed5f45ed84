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

#include "dfkit/error.hpp"
#include "dfkit/preprocess.hpp"

namespace dfkit {

std::vector<std::size_t> sample_frames(std::size_t total_frames, const FrameSamplingPlan& plan) {
  if (total_frames == 0) throw Error(ErrorCode::kInvalidPlan, "video has no frames");
  std::vector<std::size_t> out;
  switch (plan.mode) {
    case SamplingMode::kFixedStride: {
      if (!plan.stride || *plan.stride == 0) {
        throw Error(ErrorCode::kInvalidPlan, "fixed_stride needs stride >= 1");
      }
      for (std::size_t i = 0; i < total_frames; i += *plan.stride) out.push_back(i);
      break;
    }
    case SamplingMode::kFixedNumFrames: {
      if (!plan.num_frames || *plan.num_frames == 0) {
        throw Error(ErrorCode::kInvalidPlan, "fixed_num_frames needs num_frames >= 1");
      }
      const std::size_t n = std::min(*plan.num_frames, total_frames);
      if (n == 1) return {0};
      out.reserve(n);
      // n <= total_frames keeps the spacing >= 1, so indices never repeat.
      for (std::size_t i = 0; i < n; ++i) out.push_back(i * (total_frames - 1) / (n - 1));
      break;
    }
  }
  return out;
}

}  // namespace dfkit
