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

#ifndef DFKIT_METRICS_HPP_
#define DFKIT_METRICS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dfkit {

/// One frame's prediction. `score` is the fake-class probability and
/// `label` is 0 for real, 1 for fake.
struct PredictionRecord {
  std::string frame_id;
  std::string video_id;
  std::string dataset;
  double score = 0;
  int label = 0;
  std::string checkpoint;  // empty when the dump carries a single checkpoint
};

struct CurvePoint {
  double x = 0;
  double y = 0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// ROC points are (FPR, TPR) from (0, 0) to (1, 1); PR points are
/// (recall, precision) beginning at (0, 1).
struct CurveSeries {
  std::vector<CurvePoint> points;
};

struct AucResult {
  double auc = 0;
  CurveSeries roc;
};

struct ApResult {
  double ap = 0;
  CurveSeries pr;
};

struct EerResult {
  double eer = 0;
  double threshold = 0;
};

struct ThresholdMetrics {
  double acc = 0;
  double precision = 0;
  double recall = 0;
};

/// Mann-Whitney AUC, ties credited 0.5, with the ROC over unique score
/// thresholds. Trapezoidal integration of the curve reproduces the value.
/// Throws SingleClass when either class is absent.
AucResult compute_auc(std::span<const PredictionRecord> records);

/// Step-interpolated average precision, sum over descending unique-score
/// prefixes of (R_k - R_{k-1}) * P_k. Throws NoPositives.
ApResult compute_ap(std::span<const PredictionRecord> records);

/// Equal error rate. The FPR - FNR sign change between adjacent ROC vertices
/// is located by linear interpolation; `threshold` is the bracketing
/// vertex's threshold with the smaller |FPR - FNR|. Throws SingleClass.
EerResult compute_eer(std::span<const PredictionRecord> records);

/// Predictions are score >= threshold. Precision is 0 when nothing is
/// predicted fake; recall is 0 when there are no fake labels.
ThresholdMetrics compute_threshold_metrics(std::span<const PredictionRecord> records,
                                           double threshold = 0.5);

/// Mean of the three largest values, or of all values when fewer than three.
/// Throws EmptySeries.
double top3_average(std::span<const double> series);

struct MetricReport {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double threshold = 0.5;
  double acc = 0;
  double precision = 0;
  double recall = 0;
  // Undefined when the group lacks a class.
  std::optional<double> auc;
  std::optional<double> ap;
  std::optional<double> eer;
  std::optional<double> eer_threshold;
  CurveSeries roc;
  CurveSeries pr;
};

MetricReport compute_report(std::span<const PredictionRecord> records, double threshold = 0.5);

enum class GroupBy { kDataset, kDatasetCheckpoint };

struct GroupKey {
  std::string dataset;
  std::string checkpoint;  // empty for GroupBy::kDataset
  auto operator<=>(const GroupKey&) const = default;
};

std::map<GroupKey, MetricReport> aggregate(std::span<const PredictionRecord> records,
                                           GroupBy group_by, double threshold = 0.5);

/// Top-3 checkpoint averages per dataset, taken over whichever checkpoints
/// define the metric.
struct CheckpointSummary {
  std::size_t checkpoints = 0;
  std::optional<double> top3_auc;
  std::optional<double> top3_ap;
  std::optional<double> top3_acc;
  std::optional<double> top1_auc;
};

std::map<std::string, CheckpointSummary> summarize_checkpoints(
    const std::map<GroupKey, MetricReport>& per_checkpoint);

// ---------------------------------------------------------------------------
// Prediction dumps

enum class DumpFormat { kCsv, kJsonLines };

/// CSV needs a header naming frame_id, video_id, dataset, score, label (any
/// order; an optional checkpoint column is honoured). JSON-lines carries the
/// same keys per line. Throws ParseError naming the 1-based line.
std::vector<PredictionRecord> parse_prediction_dump(std::string_view text, DumpFormat format);
std::vector<PredictionRecord> load_prediction_dump(const std::filesystem::path& path);
std::string write_prediction_dump(std::span<const PredictionRecord> records, DumpFormat format);

std::string curve_to_csv(const CurveSeries& curve, std::string_view x_name, std::string_view y_name);
std::string report_to_json(const std::map<GroupKey, MetricReport>& reports);

}  // namespace dfkit

#endif  // DFKIT_METRICS_HPP_
