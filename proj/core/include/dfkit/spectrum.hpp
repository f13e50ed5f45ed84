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

#ifndef DFKIT_SPECTRUM_HPP_
#define DFKIT_SPECTRUM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

namespace dfkit {

struct SpectrumOptions {
  int side = 256;                  // common square side before the transform
  double sigma_fraction = 1.0 / 20;  // Gaussian low-pass sigma = side * sigma_fraction
  bool log_magnitude = true;       // log(1 + |F|); false exports raw |F|
  unsigned workers = 1;

  void validate() const;
};

// Grayscale, center-crop to a square, resize to options.side, subtract the
// mean and a Gaussian low-pass, DFT, shift DC to (side/2, side/2), magnitude.
// Accepts CV_8U or CV_32F/CV_64F images with 1, 3 or 4 channels.
cv::Mat image_spectrum(const cv::Mat& image, const SpectrumOptions& options = {});

// Indices of min(sample_count, population) images drawn without replacement,
// ascending. The draw depends only on (population, sample_count, seed).
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t sample_count,
                                        std::uint64_t seed);

// Loads image i of a set; lets large sets stay on disk until sampled.
using ImageLoader = std::function<cv::Mat(std::size_t)>;

struct AverageSpectrum {
  cv::Mat grid;  // CV_64FC1, side x side
  std::size_t n_sampled = 0;
};

// Mean spectrum over a seeded sample. Per-image spectra are summed pairwise in
// a fixed tree, so the result does not depend on options.workers.
// Throws EmptySet.
AverageSpectrum average_spectrum(std::size_t population, const ImageLoader& load,
                                 std::size_t sample_count, std::uint64_t seed,
                                 const SpectrumOptions& options = {});
AverageSpectrum average_spectrum(std::span<const cv::Mat> images, std::size_t sample_count,
                                 std::uint64_t seed, const SpectrumOptions& options = {});
// Reads images with cv::imread; unreadable files throw DecodeFailure.
AverageSpectrum average_spectrum(std::span<const std::filesystem::path> images,
                                 std::size_t sample_count, std::uint64_t seed,
                                 const SpectrumOptions& options = {});

struct SpectrumResult {
  cv::Mat real_avg;
  cv::Mat fake_avg;
  cv::Mat difference;  // real_avg - fake_avg
  std::size_t n_real = 0;
  std::size_t n_fake = 0;
};

// Both sets are sampled with the same seed, so equal sets give a zero
// difference.
SpectrumResult spectrum_difference(std::span<const std::filesystem::path> real,
                                   std::span<const std::filesystem::path> fake,
                                   std::size_t sample_count, std::uint64_t seed,
                                   const SpectrumOptions& options = {});
SpectrumResult spectrum_difference(std::span<const cv::Mat> real, std::span<const cv::Mat> fake,
                                   std::size_t sample_count, std::uint64_t seed,
                                   const SpectrumOptions& options = {});

// Min-max scaled 8-bit rendering of a grid; a flat grid maps to 0. Signed
// grids use the same linear map.
cv::Mat grid_to_heatmap(const cv::Mat& grid);
std::string grid_to_csv(const cv::Mat& grid);

}  // namespace dfkit

#endif  // DFKIT_SPECTRUM_HPP_
