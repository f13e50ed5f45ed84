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

#include "dfkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dfkit/error.hpp"

namespace dfkit {
namespace {

// Confusion counts after admitting every score >= the group's score.
struct Vertex {
  double threshold;
  std::size_t tp;
  std::size_t fp;
};

struct Ranking {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  // One vertex per distinct score, descending; vertex 0 admits nothing.
  std::vector<Vertex> vertices;
};

void check_record(const PredictionRecord& r) {
  if (!std::isfinite(r.score) || r.score < 0.0 || r.score > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "score of frame \"" + r.frame_id + "\" outside [0, 1]");
  }
  if (r.label != 0 && r.label != 1) {
    throw Error(ErrorCode::kInvalidArgument, "label of frame \"" + r.frame_id + "\" is not 0 or 1");
  }
}

Ranking rank(std::span<const PredictionRecord> records) {
  std::vector<std::pair<double, int>> scored;
  scored.reserve(records.size());
  for (const auto& r : records) {
    check_record(r);
    scored.emplace_back(r.score, r.label);
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  Ranking out;
  const double top = scored.empty() ? 1.0 : scored.front().first;
  out.vertices.push_back({std::nextafter(top, std::numeric_limits<double>::infinity()), 0, 0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < scored.size();) {
    const double s = scored[i].first;
    for (; i < scored.size() && scored[i].first == s; ++i) {
      (scored[i].second == 1 ? tp : fp) += 1;
    }
    out.vertices.push_back({s, tp, fp});
  }
  out.n_pos = tp;
  out.n_neg = fp;
  return out;
}

void require_both_classes(const Ranking& r) {
  if (r.n_pos == 0 || r.n_neg == 0) {
    throw Error(ErrorCode::kSingleClass, "need both real and fake records (" +
                                             std::to_string(r.n_pos) + " fake, " +
                                             std::to_string(r.n_neg) + " real)");
  }
}

}  // namespace

AucResult compute_auc(std::span<const PredictionRecord> records) {
  const Ranking r = rank(records);
  require_both_classes(r);
  // Twice the Mann-Whitney U: each negative in a group outranks nothing,
  // trails every earlier positive, and ties half of the group's positives.
  double u2 = 0;
  AucResult out;
  out.roc.points.push_back({0.0, 0.0});
  for (std::size_t g = 1; g < r.vertices.size(); ++g) {
    const auto& prev = r.vertices[g - 1];
    const auto& cur = r.vertices[g];
    const double pos = static_cast<double>(cur.tp - prev.tp);
    const double neg = static_cast<double>(cur.fp - prev.fp);
    u2 += neg * (2.0 * static_cast<double>(prev.tp) + pos);
    out.roc.points.push_back({static_cast<double>(cur.fp) / static_cast<double>(r.n_neg),
                              static_cast<double>(cur.tp) / static_cast<double>(r.n_pos)});
  }
  out.auc = u2 / (2.0 * static_cast<double>(r.n_pos) * static_cast<double>(r.n_neg));
  return out;
}

ApResult compute_ap(std::span<const PredictionRecord> records) {
  const Ranking r = rank(records);
  if (r.n_pos == 0) throw Error(ErrorCode::kNoPositives, "average precision needs a fake record");
  ApResult out;
  out.pr.points.push_back({0.0, 1.0});
  double prev_recall = 0;
  double ap = 0;
  for (std::size_t g = 1; g < r.vertices.size(); ++g) {
    const auto& v = r.vertices[g];
    const double recall = static_cast<double>(v.tp) / static_cast<double>(r.n_pos);
    const double precision = static_cast<double>(v.tp) / static_cast<double>(v.tp + v.fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    out.pr.points.push_back({recall, precision});
  }
  out.ap = ap;
  return out;
}

EerResult compute_eer(std::span<const PredictionRecord> records) {
  const Ranking r = rank(records);
  require_both_classes(r);
  const double n_pos = static_cast<double>(r.n_pos);
  const double n_neg = static_cast<double>(r.n_neg);
  auto fpr = [&](const Vertex& v) { return static_cast<double>(v.fp) / n_neg; };
  auto fnr = [&](const Vertex& v) { return static_cast<double>(r.n_pos - v.tp) / n_pos; };

  // FPR - FNR rises from -1 at vertex 0 to +1 at the last vertex.
  std::size_t i = 1;
  while (i < r.vertices.size() && fpr(r.vertices[i]) - fnr(r.vertices[i]) < 0) ++i;
  const Vertex& hi = r.vertices[i];
  const Vertex& lo = r.vertices[i - 1];
  const double d_hi = fpr(hi) - fnr(hi);
  const double d_lo = fpr(lo) - fnr(lo);

  EerResult out;
  if (d_hi == 0) {
    out.eer = fpr(hi);
    out.threshold = hi.threshold;
    return out;
  }
  const double t = -d_lo / (d_hi - d_lo);
  out.eer = fpr(lo) + t * (fpr(hi) - fpr(lo));
  out.threshold = std::abs(d_lo) <= std::abs(d_hi) ? lo.threshold : hi.threshold;
  return out;
}

ThresholdMetrics compute_threshold_metrics(std::span<const PredictionRecord> records,
                                           double threshold) {
  if (records.empty()) throw Error(ErrorCode::kInvalidArgument, "no records");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& r : records) {
    check_record(r);
    const bool predicted_fake = r.score >= threshold;
    if (r.label == 1) {
      (predicted_fake ? tp : fn) += 1;
    } else {
      (predicted_fake ? fp : tn) += 1;
    }
  }
  ThresholdMetrics m;
  m.acc = static_cast<double>(tp + tn) / static_cast<double>(records.size());
  m.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  return m;
}

double top3_average(std::span<const double> series) {
  if (series.empty()) throw Error(ErrorCode::kEmptySeries, "top-3 average of an empty series");
  std::vector<double> sorted(series.begin(), series.end());
  const std::size_t k = std::min<std::size_t>(3, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end(),
                    std::greater<>());
  return std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
         static_cast<double>(k);
}

MetricReport compute_report(std::span<const PredictionRecord> records, double threshold) {
  MetricReport rep;
  rep.threshold = threshold;
  const ThresholdMetrics tm = compute_threshold_metrics(records, threshold);
  rep.acc = tm.acc;
  rep.precision = tm.precision;
  rep.recall = tm.recall;
  for (const auto& r : records) (r.label == 1 ? rep.n_pos : rep.n_neg) += 1;
  if (rep.n_pos > 0) {
    ApResult ap = compute_ap(records);
    rep.ap = ap.ap;
    rep.pr = std::move(ap.pr);
  }
  if (rep.n_pos > 0 && rep.n_neg > 0) {
    AucResult auc = compute_auc(records);
    rep.auc = auc.auc;
    rep.roc = std::move(auc.roc);
    const EerResult eer = compute_eer(records);
    rep.eer = eer.eer;
    rep.eer_threshold = eer.threshold;
  }
  return rep;
}

std::map<GroupKey, MetricReport> aggregate(std::span<const PredictionRecord> records,
                                           GroupBy group_by, double threshold) {
  std::map<GroupKey, std::vector<PredictionRecord>> groups;
  for (const auto& r : records) {
    GroupKey key{r.dataset, group_by == GroupBy::kDatasetCheckpoint ? r.checkpoint : std::string()};
    groups[key].push_back(r);
  }
  std::map<GroupKey, MetricReport> out;
  for (const auto& [key, members] : groups) out.emplace(key, compute_report(members, threshold));
  return out;
}

std::map<std::string, CheckpointSummary> summarize_checkpoints(
    const std::map<GroupKey, MetricReport>& per_checkpoint) {
  std::map<std::string, std::vector<const MetricReport*>> by_dataset;
  for (const auto& [key, rep] : per_checkpoint) by_dataset[key.dataset].push_back(&rep);

  std::map<std::string, CheckpointSummary> out;
  for (const auto& [dataset, reps] : by_dataset) {
    CheckpointSummary s;
    s.checkpoints = reps.size();
    std::vector<double> auc, ap, acc;
    for (const MetricReport* r : reps) {
      if (r->auc) auc.push_back(*r->auc);
      if (r->ap) ap.push_back(*r->ap);
      acc.push_back(r->acc);
    }
    if (!auc.empty()) {
      s.top3_auc = top3_average(auc);
      s.top1_auc = *std::max_element(auc.begin(), auc.end());
    }
    if (!ap.empty()) s.top3_ap = top3_average(ap);
    if (!acc.empty()) s.top3_acc = top3_average(acc);
    out.emplace(dataset, s);
  }
  return out;
}

}  // namespace dfkit
