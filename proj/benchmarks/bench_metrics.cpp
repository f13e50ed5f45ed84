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
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "dfkit/metrics.hpp"
#include "dfkit/random.hpp"

namespace {

std::vector<dfkit::PredictionRecord> make_records(std::size_t n) {
  dfkit::KeyedRng rng(11, {n});
  std::vector<dfkit::PredictionRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].label = rng.bernoulli(0.5) ? 1 : 0;
    out[i].score = std::clamp(0.5 + (out[i].label ? 0.15 : -0.15) + 0.2 * rng.normal(), 0.0, 1.0);
    out[i].dataset = "bench";
    out[i].frame_id = "f" + std::to_string(i);
    out[i].video_id = "v" + std::to_string(i / 32);
  }
  out[0].label = 0;
  out[1].label = 1;
  return out;
}

void BM_Auc(benchmark::State& state) {
  const auto records = make_records(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dfkit::compute_auc(records).auc);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Auc)->Range(1 << 10, 1 << 20);

void BM_Report(benchmark::State& state) {
  const auto records = make_records(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dfkit::compute_report(records).eer);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Report)->Range(1 << 10, 1 << 18);

void BM_ParseCsv(benchmark::State& state) {
  const auto records = make_records(static_cast<std::size_t>(state.range(0)));
  const std::string text = dfkit::write_prediction_dump(records, dfkit::DumpFormat::kCsv);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dfkit::parse_prediction_dump(text, dfkit::DumpFormat::kCsv).size());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseCsv)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
