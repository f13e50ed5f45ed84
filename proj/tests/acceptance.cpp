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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <opencv2/imgproc.hpp>

#include "dfkit/augment.hpp"
#include "dfkit/log.hpp"
#include "dfkit/manifest.hpp"
#include "dfkit/metrics.hpp"
#include "dfkit/preprocess.hpp"
#include "dfkit/spectrum.hpp"
#include "dfkit/synthesis.hpp"
#include "support/oracles.hpp"
#include "support/toy_data.hpp"

namespace {

using namespace dfkit;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Thrown by require(); the message becomes the FAIL detail.
struct Failed {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool identical(const cv::Mat& a, const cv::Mat& b) {
  return a.size() == b.size() && a.type() == b.type() && cv::countNonZero(cv::Mat(a != b).reshape(1)) == 0;
}

// 1 --------------------------------------------------------------------------
std::string metric_oracles() {
  const auto t0 = Clock::now();
  double worst = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    KeyedRng rng(1, {i});
    const auto recs = testing::random_records(rng, 50);
    const double d_auc = std::abs(compute_auc(recs).auc - testing::auc_pairwise(recs));
    const double d_ap = std::abs(compute_ap(recs).ap - testing::ap_recount(recs));
    const double d_eer = std::abs(compute_eer(recs).eer - testing::eer_bisection(recs));
    worst = std::max({worst, d_auc, d_ap, d_eer});
    require(d_auc <= 1e-9 && d_ap <= 1e-9 && d_eer <= 1e-9, "instance " + std::to_string(i) + " off by " + fmt(worst));
  }
  const double t = seconds_since(t0);
  require(t < 10, "took " + fmt(t) + " s");
  return "max error " + fmt(worst) + ", " + fmt(t) + " s";
}

// 2 --------------------------------------------------------------------------
std::string monotone_invariance() {
  const std::function<double(double)> maps[] = {
      [](double x) { return x * x * x; },
      [](double x) { return 1.0 / (1.0 + std::exp(-8.0 * (x - 0.5))); },
  };
  for (std::uint64_t i = 0; i < 100; ++i) {
    KeyedRng rng(2, {i});
    const auto recs = testing::random_records(rng, 50);
    const MetricReport base = compute_report(recs);
    for (const auto& f : maps) {
      auto mapped = recs;
      for (auto& r : mapped) r.score = f(r.score);
      const MetricReport m = compute_report(mapped);
      require(std::abs(*m.auc - *base.auc) <= 1e-12, "auc changed, instance " + std::to_string(i));
      require(std::abs(*m.ap - *base.ap) <= 1e-12, "ap changed, instance " + std::to_string(i));
      require(std::abs(*m.eer - *base.eer) <= 1e-12, "eer changed, instance " + std::to_string(i));
    }
  }
  return "auc, ap, eer unchanged under x^3 and a logistic map";
}

// 3 --------------------------------------------------------------------------
std::string top3() {
  const std::vector<double> v{0.9, 0.8, 0.7, 0.6};
  const double t = top3_average(v);
  require(std::abs(t - 0.8) <= 1e-15, "got " + fmt(t));
  return "top3 = 0.8";
}

// 4 --------------------------------------------------------------------------
void make_raw_toy(const fs::path& root) {
  testing::ToyVideoOptions opt;
  opt.masks = false;
  testing::write_toy_video(root / "real", "r1", opt);
  opt.seed = 8;
  opt.faceless = {5, 6};
  testing::write_toy_video(root / "real", "r2", opt);
  opt.seed = 9;
  opt.masks = true;
  opt.faceless = {};
  testing::write_toy_video(root / "fake", "f1", opt);
}

std::string parallel_determinism() {
  const auto t0 = Clock::now();
  testing::TempDir dir("dfkit-accept");
  std::map<std::string, std::string> trees[2];
  std::string manifests[2];
  const unsigned workers[2] = {1, 8};
  for (int k = 0; k < 2; ++k) {
    const fs::path root = dir / ("run" + std::to_string(k));
    make_raw_toy(root);
    PreprocessConfig pc{"UADFV", root, std::nullopt, FrameSamplingPlan::fixed_num(32), {}};
    NullLogSink log;
    const PreprocessSummary s = preprocess_dataset(pc, workers[k], log);
    require(s.failures.empty() && s.videos.size() == 3, "preprocess did not process 3 videos");
    const fs::path out = dir / ("manifest" + std::to_string(k) + ".json");
    arrange_dataset({"UADFV", root, out, std::nullopt, std::nullopt});
    trees[k] = testing::tree_bytes(root);
    manifests[k] = testing::read_file(out);
  }
  require(trees[0] == trees[1], "face trees differ between 1 and 8 workers");
  require(manifests[0] == manifests[1], "manifests differ between 1 and 8 workers");
  const double t = seconds_since(t0);
  require(t < 60, "took " + fmt(t) + " s");
  return std::to_string(trees[0].size()) + " files identical, " + fmt(t) + " s";
}

// 5 --------------------------------------------------------------------------
std::string mask_coregistration() {
  double worst = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    KeyedRng rng(5, {trial});
    const cv::Size frame(96, 96);
    auto sim = AlignmentTransform::from_params(rng.uniform(28, 44), rng.uniform(-3, 3), {0, 0});
    const cv::Point2d c = sim.apply({0.5, 0.5});
    sim.matrix(0, 2) = 48 - c.x + rng.uniform(-5, 5);
    sim.matrix(1, 2) = 48 - c.y + rng.uniform(-5, 5);
    const LandmarkSet face = face_template(1.0).transformed(sim.matrix);
    const cv::Point q(cvRound(face[30].x), cvRound(face[30].y));
    cv::Mat mask(frame, CV_8UC1, cv::Scalar(0));
    mask.at<uchar>(q) = 255;
    const auto crop = warp_crop(mask, face, estimate_alignment(face, face_template(256)), {});
    const cv::Mat out = warp_mask(mask, crop.geometry, {});
    const cv::Matx23d& m = crop.geometry.source_to_output;
    const cv::Point2d qo(m(0, 0) * q.x + m(0, 1) * q.y + m(0, 2), m(1, 0) * q.x + m(1, 1) * q.y + m(1, 2));
    // Distance from the warped point to the nearest set output pixel.
    double best = 1e9;
    for (int y = 0; y < out.rows; ++y) {
      for (int x = 0; x < out.cols; ++x) {
        if (out.at<uchar>(y, x)) best = std::min(best, std::max(std::abs(x - qo.x), std::abs(y - qo.y)));
      }
    }
    worst = std::max(worst, best);
    require(best <= 0.5, "trial " + std::to_string(trial) + " off by " + fmt(best) + " px");
  }
  return "worst offset " + fmt(worst) + " px";
}

// 6 --------------------------------------------------------------------------
std::string crop_geometry() {
  double worst = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    KeyedRng rng(6, {trial});
    const cv::Size frame(320, 240);
    const LandmarkSet face = testing::random_face(rng, frame);
    const cv::Mat image = testing::toy_frame(frame, face, trial);
    const CropSpec spec;
    const auto crop = warp_crop(image, face, estimate_alignment(face, face_template(spec.output_size)), spec);
    require(crop.face.size() == cv::Size(256, 256), "output is not 256x256");
    const double mw = crop.geometry.box.width / crop.geometry.side_before_margin;
    const double mh = crop.geometry.box.height / crop.geometry.side_before_margin;
    worst = std::max({worst, std::abs(mw - 1.3), std::abs(mh - 1.3)});
  }
  require(worst <= 1e-6, "margin off by " + fmt(worst));
  return "256x256, margin error " + fmt(worst);
}

// 7 --------------------------------------------------------------------------
std::string frame_sampling() {
  const auto n = sample_frames(100, FrameSamplingPlan::fixed_num(32));
  require(n.size() == 32, "expected 32 indices");
  require(std::set<std::size_t>(n.begin(), n.end()).size() == 32, "indices not unique");
  require(std::is_sorted(n.begin(), n.end()), "indices not increasing");
  require(n.front() == 0 && n.back() == 99, "endpoints missing");
  require(sample_frames(10, FrameSamplingPlan::fixed_stride(3)) == std::vector<std::size_t>{0, 3, 6, 9},
          "stride 3 on 10 frames");
  return "32 of 100 and stride 3 of 10 as expected";
}

// 8 --------------------------------------------------------------------------
std::string synthesis_invariants() {
  KeyedRng rng(8, {});
  cv::Mat f(40, 30, CV_8UC3), g(40, 30, CV_8UC3);
  cv::RNG(1).fill(f, cv::RNG::UNIFORM, 0, 256);
  cv::RNG(2).fill(g, cv::RNG::UNIFORM, 0, 256);
  cv::Mat dyadic(f.size(), CV_64F);
  for (int y = 0; y < dyadic.rows; ++y) {
    for (int x = 0; x < dyadic.cols; ++x) dyadic.at<double>(y, x) = static_cast<double>(rng.uniform_int(0, 64)) / 64;
  }
  require(identical(blend(f, g, BlendMask::filled(f.size(), 1.0)), f), "M=1 is not the foreground");
  require(identical(blend(f, g, BlendMask::filled(f.size(), 0.0)), g), "M=0 is not the background");
  require(identical(blend(f, f, BlendMask(dyadic)), f), "blend(x, x) != x");

  const cv::Mat anchors = boundary_map(BlendMask((cv::Mat_<double>(1, 3) << 0.0, 0.5, 1.0)));
  require(anchors.at<double>(0, 0) == 0 && anchors.at<double>(0, 1) == 1 && anchors.at<double>(0, 2) == 0,
          "boundary anchors");
  require(identical(boundary_map(BlendMask(dyadic)), boundary_map(BlendMask(1.0 - dyadic))),
          "boundary not symmetric in M and 1 - M");

  KeyedRng face_rng(8, {1});
  const LandmarkSet face = testing::random_face(face_rng, {128, 128});
  const cv::Mat image = testing::toy_frame({128, 128}, face, 3);
  for (double scale : kFwaScales) {
    BlendRecipe r;
    r.fwa_scale = scale;
    r.seed = 4;
    const SynthesisResult out = fwa_generate(image, face, r);
    const cv::Mat outside = out.mask.values() == 0.0;
    require(cv::countNonZero(outside) > 0, "mask covers the whole image");
    cv::Mat changed;
    cv::absdiff(out.forged, image, changed);
    cv::cvtColor(changed, changed, cv::COLOR_BGR2GRAY);
    require(cv::countNonZero(changed & outside) == 0, "fwa changed a pixel where the mask is 0");
  }

  std::set<double> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    KeyedRng draw(8, {2, i});
    seen.insert(draw_recipe({}, draw).fwa_scale);
  }
  require(seen == std::set<double>(kFwaScales.begin(), kFwaScales.end()), "scale draws outside {0.2..0.8}");
  return "blend, boundary and fwa invariants hold; 7 scales seen";
}

// 9 --------------------------------------------------------------------------
std::string augment_rates() {
  const cv::Mat img(8, 8, CV_8UC3, cv::Scalar(90, 120, 150));
  const AugmentPipeline p = AugmentPipeline::standard(9);
  constexpr std::size_t kTrials = 100000;
  std::set<int> kernels;
  for (std::size_t k = 0; k < p.ops.size(); ++k) {
    const AugmentOp& op = p.ops[k];
    std::size_t fired = 0;
    for (std::size_t i = 0; i < kTrials; ++i) {
      KeyedRng rng(9, {i, k});
      AppliedOp rec;
      apply(op, img, rng, &rec);
      if (!rec.fired) continue;
      ++fired;
      switch (op.kind()) {
        case AugmentKind::kRotate: {
          const double a = rec.params.at("angle");
          require(a >= -10 && a <= 10, "rotation " + fmt(a));
          break;
        }
        case AugmentKind::kJpegCompress: {
          const double q = rec.params.at("quality");
          require(q >= 40 && q <= 100, "quality " + fmt(q));
          break;
        }
        case AugmentKind::kGaussianBlur:
          kernels.insert(static_cast<int>(rec.params.at("kernel")));
          break;
        default:
          break;
      }
    }
    const double pr = op.probability;
    const double sigma = std::sqrt(kTrials * pr * (1 - pr));
    const double dev = std::abs(static_cast<double>(fired) - kTrials * pr);
    require(dev <= 3 * sigma, std::string(to_string(op.kind())) + " fired " + std::to_string(fired) + " times");
  }
  require(kernels == std::set<int>{3, 5, 7}, "blur kernels outside {3,5,7}");
  return "8 ops within 3 sigma over 1e5 trials";
}

// 10 -------------------------------------------------------------------------
std::string spectrum_checks() {
  SpectrumOptions opt;
  opt.side = 64;
  require(cv::norm(image_spectrum(cv::Mat(80, 80, CV_8UC3, cv::Scalar::all(77)), opt), cv::NORM_INF) == 0,
          "constant image gives a non-zero spectrum");

  cv::Mat noise(90, 90, CV_8UC3);
  cv::RNG(10).fill(noise, cv::RNG::UNIFORM, 0, 256);
  const cv::Mat s = image_spectrum(noise, opt);
  const int n = opt.side;
  double asym = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) asym = std::max(asym, std::abs(s.at<double>(r, c) - s.at<double>((n - r) % n, (n - c) % n)));
  }
  require(asym <= 1e-9, "conjugate symmetry off by " + fmt(asym));

  const int k = 9;
  cv::Mat wave(n, n, CV_64F);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) wave.at<double>(y, x) = 100 * std::cos(2 * CV_PI * k * x / n);
  }
  cv::Point peak;
  cv::minMaxLoc(image_spectrum(wave, opt), nullptr, nullptr, nullptr, &peak);
  require(peak.y == n / 2 && std::abs(peak.x - n / 2) == k, "sinusoid peak not at (+-k, 0)");

  std::vector<cv::Mat> set;
  for (int i = 0; i < 10; ++i) {
    cv::Mat m(70, 70, CV_8UC3);
    cv::RNG(100 + i).fill(m, cv::RNG::UNIFORM, 0, 256);
    set.push_back(m);
  }
  require(cv::norm(spectrum_difference(set, set, 6, 1, opt).difference, cv::NORM_INF) == 0,
          "identical sets give a non-zero difference");
  return "zero, symmetric, peaked and differencing as expected";
}

// 11 -------------------------------------------------------------------------
std::string split_rules() {
  testing::TempDir dir("dfkit-accept");
  testing::make_ff_toy(dir / "ff", "c23");
  const DatasetManifest ff =
      arrange_dataset({"FaceForensics++", dir / "ff", dir / "ff.json", std::string("c23"), std::nullopt});
  const std::string train = serialize_split(ff, Label::kReal, Split::kTrain);
  require(!query_split(ff, Split::kTrain, Label::kReal).empty(), "no FF++ reals");
  require(train == serialize_split(ff, Label::kReal, Split::kValidation) &&
              train == serialize_split(ff, Label::kReal, Split::kTest),
          "FF++ real splits differ");

  testing::make_celebdf_toy(dir / "celeb");
  const DatasetManifest celeb =
      arrange_dataset({"Celeb-DF-v2", dir / "celeb", dir / "celeb.json", std::nullopt, std::nullopt});
  for (Label label : {Label::kReal, Label::kFake}) {
    require(serialize_split(celeb, label, Split::kValidation) == serialize_split(celeb, label, Split::kTest),
            "Celeb-DF validation differs from test");
  }
  require(!query_split(celeb, Split::kTest).empty(), "Celeb-DF test split is empty");
  return "FF++ reals equal across splits; Celeb-DF validation == test";
}

}  // namespace

int main() {
  const std::pair<const char*, std::string (*)()> criteria[] = {
      {"metric oracles", metric_oracles},
      {"monotone invariance", monotone_invariance},
      {"top-3 average", top3},
      {"worker-count determinism", parallel_determinism},
      {"mask co-registration", mask_coregistration},
      {"crop size and margin", crop_geometry},
      {"frame sampling", frame_sampling},
      {"blend, boundary and fwa invariants", synthesis_invariants},
      {"augmentation rates and ranges", augment_rates},
      {"spectrum properties", spectrum_checks},
      {"split rules", split_rules},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    std::string status = "PASS";
    std::string detail;
    try {
      detail = fn();
    } catch (const Failed& f) {
      status = "FAIL";
      detail = f.why;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("exception: ") + e.what();
    }
    failed += status == "FAIL";
    std::printf("%s %d: %s (%s)\n", status.c_str(), n, name, detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
