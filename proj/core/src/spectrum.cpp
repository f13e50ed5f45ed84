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

#include "dfkit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "dfkit/error.hpp"
#include "dfkit/parallel.hpp"
#include "dfkit/random.hpp"

namespace dfkit {
namespace {

constexpr std::size_t kBlock = 32;

cv::Mat to_gray64(const cv::Mat& image) {
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "empty image");
  const int depth = image.depth();
  if (depth != CV_8U && depth != CV_32F && depth != CV_64F) {
    throw Error(ErrorCode::kUnsupportedImageDepth, "spectrum input must be 8U, 32F or 64F");
  }
  cv::Mat src;
  image.convertTo(src, CV_64F);
  // ITU-R BT.601 luma, as cv::COLOR_BGR2GRAY, kept in double precision.
  const cv::Matx13d bgr(0.114, 0.587, 0.299);
  const cv::Matx14d bgra(0.114, 0.587, 0.299, 0.0);
  cv::Mat gray;
  switch (src.channels()) {
    case 1: gray = src; break;
    case 3: cv::transform(src, gray, bgr); break;
    case 4: cv::transform(src, gray, bgra); break;
    default: throw Error(ErrorCode::kInvalidArgument, "spectrum input needs 1, 3 or 4 channels");
  }
  return gray;
}

cv::Mat to_square(const cv::Mat& gray, int side) {
  const int s = std::min(gray.cols, gray.rows);
  cv::Mat square = gray(cv::Rect((gray.cols - s) / 2, (gray.rows - s) / 2, s, s));
  // Centring before the resize keeps a constant image exactly zero; the
  // interpolation weights do not sum to exactly one.
  cv::Mat centred = square - cv::mean(square)[0];
  if (s == side) return centred;
  cv::Mat out;
  cv::resize(centred, out, cv::Size(side, side), 0, 0, s > side ? cv::INTER_AREA : cv::INTER_LINEAR);
  return out;
}

void fft_shift(cv::Mat& m) {
  const int cx = m.cols / 2;
  const int cy = m.rows / 2;
  cv::Mat shifted(m.size(), m.type());
  // Rolling by half a period moves index 0 to the center for any size.
  for (int y = 0; y < m.rows; ++y) {
    const double* src = m.ptr<double>(y);
    double* dst = shifted.ptr<double>((y + cy) % m.rows);
    for (int x = 0; x < m.cols; ++x) dst[(x + cx) % m.cols] = src[x];
  }
  m = shifted;
}

cv::Mat pairwise_sum(std::vector<cv::Mat>& grids, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return grids[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  cv::Mat a = pairwise_sum(grids, lo, mid);
  cv::Mat b = pairwise_sum(grids, mid, hi);
  return a + b;
}

}  // namespace

void SpectrumOptions::validate() const {
  if (side < 8) throw Error(ErrorCode::kInvalidArgument, "spectrum side must be at least 8");
  if (!(sigma_fraction > 0)) throw Error(ErrorCode::kInvalidArgument, "sigma_fraction must be positive");
}

cv::Mat image_spectrum(const cv::Mat& image, const SpectrumOptions& options) {
  options.validate();
  cv::Mat gray = to_square(to_gray64(image), options.side);
  gray -= cv::mean(gray)[0];
  const double sigma = options.side * options.sigma_fraction;
  const int k = 2 * static_cast<int>(std::ceil(3 * sigma)) + 1;
  cv::Mat low;
  cv::GaussianBlur(gray, low, cv::Size(k, k), sigma, sigma, cv::BORDER_REFLECT101);
  cv::Mat high = gray - low;

  cv::Mat freq;
  cv::dft(high, freq, cv::DFT_COMPLEX_OUTPUT);
  cv::Mat planes[2];
  cv::split(freq, planes);
  cv::Mat mag;
  cv::magnitude(planes[0], planes[1], mag);
  fft_shift(mag);
  if (options.log_magnitude) {
    mag += 1.0;
    cv::log(mag, mag);
  }
  return mag;
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t sample_count,
                                        std::uint64_t seed) {
  const std::size_t n = std::min(population, sample_count);
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n < population) {
    KeyedRng rng(seed, {population});
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(population - 1)));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
  }
  return idx;
}

AverageSpectrum average_spectrum(std::size_t population, const ImageLoader& load,
                                 std::size_t sample_count, std::uint64_t seed,
                                 const SpectrumOptions& options) {
  options.validate();
  if (population == 0 || sample_count == 0) throw Error(ErrorCode::kEmptySet, "no images to average");
  const auto chosen = sample_indices(population, sample_count, seed);
  const std::size_t blocks = (chosen.size() + kBlock - 1) / kBlock;
  std::vector<cv::Mat> block_sums(blocks);
  parallel_for(blocks, options.workers, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(chosen.size(), lo + kBlock);
    std::vector<cv::Mat> grids;
    grids.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) grids.push_back(image_spectrum(load(chosen[i]), options));
    block_sums[b] = pairwise_sum(grids, 0, grids.size());
  });
  AverageSpectrum out;
  out.n_sampled = chosen.size();
  out.grid = pairwise_sum(block_sums, 0, blocks) / static_cast<double>(out.n_sampled);
  return out;
}

AverageSpectrum average_spectrum(std::span<const cv::Mat> images, std::size_t sample_count,
                                 std::uint64_t seed, const SpectrumOptions& options) {
  return average_spectrum(images.size(), [&](std::size_t i) { return images[i]; }, sample_count,
                          seed, options);
}

AverageSpectrum average_spectrum(std::span<const std::filesystem::path> images,
                                 std::size_t sample_count, std::uint64_t seed,
                                 const SpectrumOptions& options) {
  auto load = [&](std::size_t i) {
    cv::Mat m = cv::imread(images[i].string(), cv::IMREAD_UNCHANGED);
    if (m.empty()) throw Error(ErrorCode::kDecodeFailure, "cannot decode " + images[i].string());
    return m;
  };
  return average_spectrum(images.size(), load, sample_count, seed, options);
}

namespace {

template <typename Set>
SpectrumResult difference_of(Set real, Set fake, std::size_t sample_count, std::uint64_t seed,
                             const SpectrumOptions& options) {
  if (real.empty() || fake.empty()) throw Error(ErrorCode::kEmptySet, "both image sets must be non-empty");
  AverageSpectrum r = average_spectrum(real, sample_count, seed, options);
  AverageSpectrum f = average_spectrum(fake, sample_count, seed, options);
  SpectrumResult out;
  out.difference = r.grid - f.grid;
  out.real_avg = std::move(r.grid);
  out.fake_avg = std::move(f.grid);
  out.n_real = r.n_sampled;
  out.n_fake = f.n_sampled;
  return out;
}

}  // namespace

SpectrumResult spectrum_difference(std::span<const std::filesystem::path> real,
                                   std::span<const std::filesystem::path> fake,
                                   std::size_t sample_count, std::uint64_t seed,
                                   const SpectrumOptions& options) {
  return difference_of(real, fake, sample_count, seed, options);
}

SpectrumResult spectrum_difference(std::span<const cv::Mat> real, std::span<const cv::Mat> fake,
                                   std::size_t sample_count, std::uint64_t seed,
                                   const SpectrumOptions& options) {
  return difference_of(real, fake, sample_count, seed, options);
}

cv::Mat grid_to_heatmap(const cv::Mat& grid) {
  double lo = 0, hi = 0;
  cv::minMaxLoc(grid, &lo, &hi);
  cv::Mat out;
  if (hi == lo) return cv::Mat::zeros(grid.size(), CV_8UC1);
  grid.convertTo(out, CV_8U, 255.0 / (hi - lo), -lo * 255.0 / (hi - lo));
  return out;
}

std::string grid_to_csv(const cv::Mat& grid) {
  cv::Mat g;
  grid.convertTo(g, CV_64F);
  std::string out;
  char buf[32];
  for (int y = 0; y < g.rows; ++y) {
    for (int x = 0; x < g.cols; ++x) {
      if (x) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", g.at<double>(y, x));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace dfkit
