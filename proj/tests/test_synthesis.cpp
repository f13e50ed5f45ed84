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
#include <set>

#include <gtest/gtest.h>
#include <opencv2/imgproc.hpp>

#include "dfkit/error.hpp"
#include "dfkit/synthesis.hpp"
#include "oracles.hpp"
#include "toy_data.hpp"

namespace dfkit {
namespace {

cv::Mat random_image(cv::Size size, int type, std::uint64_t seed) {
  cv::Mat m(size, type);
  cv::RNG rng(seed);
  rng.fill(m, cv::RNG::UNIFORM, 0, 256);
  return m;
}

bool identical(const cv::Mat& a, const cv::Mat& b) {
  if (a.size() != b.size() || a.type() != b.type()) return false;
  return cv::countNonZero(cv::Mat(a != b).reshape(1)) == 0;
}

// Mask holding multiples of 1/64 so that 1 - M is exact.
BlendMask dyadic_mask(cv::Size size, std::uint64_t seed) {
  KeyedRng rng(seed, {});
  cv::Mat v(size, CV_64FC1);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) v.at<double>(y, x) = static_cast<double>(rng.uniform_int(0, 64)) / 64.0;
  }
  return BlendMask(v);
}

TEST(Blend, MaskOneIsForegroundZeroIsBackground) {
  const cv::Mat f = random_image({40, 30}, CV_8UC3, 1);
  const cv::Mat g = random_image({40, 30}, CV_8UC3, 2);
  EXPECT_TRUE(identical(blend(f, g, BlendMask::filled(f.size(), 1.0)), f));
  EXPECT_TRUE(identical(blend(f, g, BlendMask::filled(f.size(), 0.0)), g));
  EXPECT_TRUE(identical(blend(f, f, dyadic_mask(f.size(), 3)), f));
}

TEST(Blend, LinearInImages) {
  const cv::Size size(16, 16);
  const cv::Mat f1 = random_image(size, CV_64FC3, 4), f2 = random_image(size, CV_64FC3, 5);
  const cv::Mat g1 = random_image(size, CV_64FC3, 6), g2 = random_image(size, CV_64FC3, 7);
  const BlendMask m = dyadic_mask(size, 8);
  const cv::Mat lhs = blend(0.25 * f1 + 2.0 * f2, 0.25 * g1 + 2.0 * g2, m);
  const cv::Mat rhs = 0.25 * blend(f1, g1, m) + 2.0 * blend(f2, g2, m);
  EXPECT_LE(cv::norm(lhs, rhs, cv::NORM_INF), 1e-9);
}

TEST(Blend, SizeMismatch) {
  const cv::Mat f(10, 10, CV_8UC3, cv::Scalar::all(0));
  const cv::Mat g(10, 11, CV_8UC3, cv::Scalar::all(0));
  EXPECT_THROW(blend(f, g, BlendMask::filled(f.size(), 1)), Error);
  EXPECT_THROW(blend(f, f, BlendMask::filled({3, 3}, 1)), Error);
}

TEST(BlendMask, RejectsOutOfRange) {
  EXPECT_THROW(BlendMask(cv::Mat(2, 2, CV_64FC1, cv::Scalar(1.5))), Error);
  EXPECT_THROW(BlendMask(cv::Mat(2, 2, CV_8UC1, cv::Scalar(1))), Error);
}

TEST(BoundaryMap, AnchorsAndSymmetry) {
  cv::Mat v = (cv::Mat_<double>(1, 3) << 0.0, 0.5, 1.0);
  const cv::Mat b = boundary_map(BlendMask(v));
  EXPECT_EQ(b.at<double>(0, 0), 0.0);
  EXPECT_EQ(b.at<double>(0, 1), 1.0);
  EXPECT_EQ(b.at<double>(0, 2), 0.0);

  const BlendMask m = dyadic_mask({32, 32}, 9);
  const BlendMask flipped(1.0 - m.values());
  EXPECT_TRUE(identical(boundary_map(m), boundary_map(flipped)));
  double lo = 0, hi = 0;
  cv::minMaxLoc(boundary_map(m), &lo, &hi);
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, 1.0);
}

TEST(HullMask, MatchesBruteForceOracle) {
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    KeyedRng rng(31, {trial});
    const cv::Size size(48, 40);
    LandmarkSet::Points pts{};
    for (auto& p : pts) p = {rng.uniform(-5, 52), rng.uniform(-5, 44)};
    const BlendMask mask = hull_mask(LandmarkSet(pts), size);
    for (int y = 0; y < size.height; ++y) {
      for (int x = 0; x < size.width; ++x) {
        const cv::Point2d c(x, y);
        const bool strictly_in = testing::inside_hull_bruteforce(pts, c, -1e-9);
        const bool loosely_in = testing::inside_hull_bruteforce(pts, c, 1e-9);
        const double v = mask.at(y, x);
        if (strictly_in) ASSERT_EQ(v, 1.0) << trial << " at " << x << "," << y;
        if (!loosely_in) ASSERT_EQ(v, 0.0) << trial << " at " << x << "," << y;
      }
    }
  }
}

TEST(HullMask, PixelCenterOnEdgeCounts) {
  LandmarkSet::Points pts{};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int k = static_cast<int>(i % 4);
    pts[i] = {k == 1 || k == 2 ? 6.0 : 2.0, k >= 2 ? 8.0 : 3.0};
  }
  const BlendMask m = hull_mask(LandmarkSet(pts), {12, 12});
  EXPECT_EQ(m.at(3, 2), 1.0);
  EXPECT_EQ(m.at(8, 6), 1.0);
  EXPECT_EQ(m.at(5, 4), 1.0);
  EXPECT_EQ(m.at(2, 2), 0.0);
  EXPECT_EQ(m.at(5, 7), 0.0);
  EXPECT_EQ(cv::countNonZero(m.values()), 5 * 6);
}

TEST(HullMask, Collinear) {
  LandmarkSet::Points pts{};
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {double(i), 2.0 * double(i)};
  EXPECT_THROW(hull_mask(LandmarkSet(pts), {100, 200}), Error);
}

TEST(DeformFeather, DeterministicPerSeedAndBounded) {
  const BlendMask hull = hull_mask(face_template(64).transformed({1, 0, 16, 0, 1, 16}), {96, 96});
  BlendRecipe r;
  r.seed = 77;
  const BlendMask a = deform_feather(hull, r);
  const BlendMask b = deform_feather(hull, r);
  EXPECT_TRUE(identical(a.values(), b.values()));
  r.seed = 78;
  EXPECT_FALSE(identical(a.values(), deform_feather(hull, r).values()));
  double lo = 0, hi = 0;
  cv::minMaxLoc(a.values(), &lo, &hi);
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, 1.0);
  EXPECT_GT(hi, 0.9);
  // Feathering yields a soft edge.
  EXPECT_GT(cv::countNonZero((a.values() > 0.05) & (a.values() < 0.95)), 0);
}

TEST(DrawRecipe, ScalesOnlyFromTheDocumentedSet) {
  std::set<double> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    KeyedRng rng(5, {i});
    const double s = draw_recipe({}, rng).fwa_scale;
    ASSERT_NE(std::find(kFwaScales.begin(), kFwaScales.end(), s), kFwaScales.end());
    seen.insert(s);
  }
  EXPECT_EQ(seen.size(), kFwaScales.size());
}

struct FaceFixture {
  cv::Mat image;
  LandmarkSet landmarks;
};

FaceFixture face_fixture(std::uint64_t seed) {
  KeyedRng rng(seed, {});
  FaceFixture f;
  f.landmarks = testing::random_face(rng, {128, 128});
  f.image = testing::toy_frame({128, 128}, f.landmarks, seed);
  return f;
}

TEST(Fwa, OutsideMaskUntouched) {
  const FaceFixture f = face_fixture(12);
  for (double scale : kFwaScales) {
    BlendRecipe r;
    r.fwa_scale = scale;
    r.seed = 4;
    const SynthesisResult out = fwa_generate(f.image, f.landmarks, r);
    ASSERT_EQ(out.forged.type(), f.image.type());
    const cv::Mat outside = out.mask.values() == 0.0;
    ASSERT_GT(cv::countNonZero(outside), 0);
    cv::Mat diff;
    cv::absdiff(out.forged, f.image, diff);
    for (int y = 0; y < diff.rows; ++y) {
      for (int x = 0; x < diff.cols; ++x) {
        if (outside.at<uchar>(y, x)) ASSERT_EQ(diff.at<cv::Vec3b>(y, x), cv::Vec3b(0, 0, 0));
      }
    }
  }
}

TEST(Fwa, SmallScaleLowersHighFrequencyEnergy) {
  // A high-frequency checker texture: low scale must blur it inside the hull.
  const FaceFixture f = face_fixture(13);
  cv::Mat texture(f.image.size(), CV_8UC3);
  for (int y = 0; y < texture.rows; ++y) {
    for (int x = 0; x < texture.cols; ++x) texture.at<cv::Vec3b>(y, x) = cv::Vec3b::all(((x + y) % 2) ? 220 : 30);
  }
  BlendRecipe r;
  r.fwa_scale = 0.2;
  r.seed = 1;
  const SynthesisResult out = fwa_generate(texture, f.landmarks, r);
  const cv::Mat region = hull_mask(f.landmarks, texture.size()).values() > 0.5;
  cv::Mat before, after;
  cv::cvtColor(texture, before, cv::COLOR_BGR2GRAY);
  cv::cvtColor(out.forged, after, cv::COLOR_BGR2GRAY);
  before.convertTo(before, CV_64F);
  after.convertTo(after, CV_64F);
  EXPECT_LT(testing::laplacian_energy(after, region), testing::laplacian_energy(before, region));
}

TEST(Fwa, Deterministic) {
  const FaceFixture f = face_fixture(14);
  BlendRecipe r;
  r.seed = 99;
  const auto a = fwa_generate(f.image, f.landmarks, r);
  const auto b = fwa_generate(f.image, f.landmarks, r);
  EXPECT_TRUE(identical(a.forged, b.forged));
  EXPECT_TRUE(identical(a.boundary, boundary_map(a.mask)));
}

TEST(Fwa, InvalidRecipe) {
  const FaceFixture f = face_fixture(15);
  BlendRecipe r;
  r.fwa_scale = 0.55;
  EXPECT_THROW(fwa_generate(f.image, f.landmarks, r), Error);
}

TEST(Xray, ComposesDonorInsideTargetHull) {
  const FaceFixture t = face_fixture(16);
  const FaceFixture d = face_fixture(17);
  BlendRecipe r;
  r.seed = 5;
  const auto out = xray_generate(t.image, t.landmarks, d.image, d.landmarks, r);
  EXPECT_EQ(out.forged.size(), t.image.size());
  for (int y = 0; y < t.image.rows; ++y) {
    for (int x = 0; x < t.image.cols; ++x) {
      if (out.mask.at(y, x) == 0.0) ASSERT_EQ(out.forged.at<cv::Vec3b>(y, x), t.image.at<cv::Vec3b>(y, x));
    }
  }
  EXPECT_GT(cv::norm(out.forged, t.image, cv::NORM_L1), 0.0);
}

TEST(XrayStream, ReproducibleAndDonorIsNeighbour) {
  std::vector<XrayStream::Face> pool;
  for (std::uint64_t i = 0; i < 8; ++i) {
    const FaceFixture f = face_fixture(100 + i);
    pool.push_back({f.image, f.landmarks});
  }
  BlendRecipe base;
  base.seed = 3;
  const XrayStream stream(pool, base, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto a = stream.generate(i);
    const auto b = stream.generate(i);
    EXPECT_EQ(a.target, b.target);
    EXPECT_EQ(a.donor, b.donor);
    EXPECT_TRUE(identical(a.result.forged, b.result.forged));
    EXPECT_NE(a.donor, a.target);
    const auto& nb = stream.neighbours_of(a.target);
    EXPECT_EQ(nb.size(), 3u);
    EXPECT_NE(std::find(nb.begin(), nb.end(), a.donor), nb.end());
  }
}

}  // namespace
}  // namespace dfkit
