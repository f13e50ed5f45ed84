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

#include <benchmark/benchmark.h>
#include <opencv2/core.hpp>

#include "dfkit/augment.hpp"
#include "dfkit/landmarks.hpp"
#include "dfkit/preprocess.hpp"
#include "dfkit/spectrum.hpp"
#include "dfkit/synthesis.hpp"

namespace {

cv::Mat noise_image(cv::Size size) {
  cv::Mat m(size, CV_8UC3);
  cv::RNG rng(3);
  rng.fill(m, cv::RNG::UNIFORM, 0, 256);
  return m;
}

void BM_WarpCrop(benchmark::State& state) {
  const cv::Mat frame = noise_image({1280, 720});
  const dfkit::CropSpec spec;
  const dfkit::LandmarkSet face = dfkit::face_template(300).transformed(cv::Matx23d(1, 0, 490, 0, 1, 210));
  const dfkit::LandmarkSet tmpl = dfkit::face_template(spec.output_size);
  for (auto _ : state) {
    const auto crop = dfkit::warp_crop(frame, face, dfkit::estimate_alignment(face, tmpl), spec);
    benchmark::DoNotOptimize(crop.face.data);
  }
}
BENCHMARK(BM_WarpCrop)->Unit(benchmark::kMicrosecond);

void BM_AugmentPipeline(benchmark::State& state) {
  const cv::Mat face = noise_image({256, 256});
  const auto pipeline = dfkit::AugmentPipeline::standard(5);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dfkit::apply_pipeline(pipeline, face, i++).first.data);
}
BENCHMARK(BM_AugmentPipeline)->Unit(benchmark::kMicrosecond);

void BM_FwaGenerate(benchmark::State& state) {
  const cv::Mat face = noise_image({256, 256});
  const dfkit::LandmarkSet lm = dfkit::face_template(256);
  dfkit::BlendRecipe recipe;
  for (auto _ : state) {
    ++recipe.seed;
    benchmark::DoNotOptimize(dfkit::fwa_generate(face, lm, recipe).forged.data);
  }
}
BENCHMARK(BM_FwaGenerate)->Unit(benchmark::kMicrosecond);

void BM_ImageSpectrum(benchmark::State& state) {
  const cv::Mat face = noise_image({256, 256});
  dfkit::SpectrumOptions opt;
  opt.side = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dfkit::image_spectrum(face, opt).data);
}
BENCHMARK(BM_ImageSpectrum)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_AverageSpectrum(benchmark::State& state) {
  std::vector<cv::Mat> images;
  for (int i = 0; i < 64; ++i) images.push_back(noise_image({128, 128}));
  dfkit::SpectrumOptions opt;
  opt.side = 128;
  opt.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dfkit::average_spectrum(images, 64, 1, opt).grid.data);
}
BENCHMARK(BM_AverageSpectrum)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
