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

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "dfkit/parallel.hpp"
#include "dfkit/random.hpp"

namespace dfkit {
namespace {

TEST(KeyedRng, SameKeySameStream) {
  KeyedRng a(42, {1, 2}), b(42, {1, 2});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(KeyedRng, PathChangesStream) {
  KeyedRng a(42, {1, 2}), b(42, {2, 1}), c(43, {1, 2});
  EXPECT_NE(a.next(), b.next());
  EXPECT_NE(KeyedRng(42, {1, 2}).next(), c.next());
}

TEST(KeyedRng, Uniform01InUnitInterval) {
  KeyedRng rng(7, {});
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(KeyedRng, UniformIntCoversRangeEvenly) {
  KeyedRng rng(9, {3});
  std::vector<int> hist(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng.uniform_int(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    ++hist[static_cast<std::size_t>(v + 3)];
  }
  const double expect = n / 7.0, sigma = std::sqrt(n * (1 / 7.0) * (6 / 7.0));
  for (int h : hist) EXPECT_NEAR(h, expect, 4 * sigma);
}

TEST(KeyedRng, SingletonRange) {
  KeyedRng rng(1, {});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(rng.uniform_int(5, 5), 5);
}

TEST(KeyedRng, NormalMoments) {
  KeyedRng rng(11, {});
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.03);
}

TEST(KeyedRng, DrawsCountsCalls) {
  KeyedRng rng(1, {});
  rng.next();
  rng.next();
  EXPECT_EQ(rng.draws(), 2u);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (unsigned workers : {1u, 2u, 8u, 64u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, RethrowsAfterJoin) {
  std::atomic<int> done{0};
  EXPECT_THROW(parallel_for(100, 4,
                            [&](std::size_t i) {
                              if (i == 17) throw std::runtime_error("unit 17");
                              done++;
                            }),
               std::runtime_error);
  EXPECT_EQ(done.load(), 99);
}

TEST(ParallelFor, ZeroCountIsNoop) {
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

}  // namespace
}  // namespace dfkit
