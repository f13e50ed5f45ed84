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
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <opencv2/imgcodecs.hpp>

#include "dfkit/cli/app.hpp"
#include "dfkit/cli/report.hpp"
#include "dfkit/manifest.hpp"
#include "dfkit/metrics.hpp"
#include "json.hpp"
#include "support/toy_data.hpp"

namespace dfkit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
  json err_json() const { return err.empty() ? json() : json::parse(err); }
};

Outcome dfkit_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path write_config(const TempDir& dir, const std::string& name, const std::string& yaml) {
  const fs::path p = dir / name;
  testing::write_file(p, yaml);
  return p;
}

// real/ holds two unmasked videos, fake/ one masked video.
void make_uadfv_raw(const fs::path& root) {
  testing::ToyVideoOptions opt;
  opt.frames = 8;
  opt.masks = false;
  testing::write_toy_video(root / "real", "r1", opt);
  opt.seed = 8;
  testing::write_toy_video(root / "real", "r2", opt);
  opt.masks = true;
  opt.seed = 9;
  testing::write_toy_video(root / "fake", "f1", opt);
}

TEST(Cli, UsageErrorsAreJson) {
  const Outcome none = dfkit_cli({});
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(none.err_json()["error"]["type"], "UsageError");
  EXPECT_EQ(dfkit_cli({"frobnicate", "--config", "x.yaml"}).code, 1);
  const Outcome help = dfkit_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("augment-preview"), std::string::npos);
}

TEST(Cli, MissingConfigFile) {
  const Outcome o = dfkit_cli({"preprocess", "--config", "/nonexistent/cfg.yaml"});
  EXPECT_EQ(o.code, 1);
  EXPECT_EQ(o.err_json()["status"], "failed");
}

TEST(Cli, UnknownDatasetNamesTheKey) {
  TempDir dir;
  const auto cfg = write_config(dir, "p.yaml",
                                "dataset_name: NotADataset\ndataset_root_path: " + dir.path().string() + "\n");
  const Outcome o = dfkit_cli({"preprocess", "--config", cfg.string()});
  EXPECT_EQ(o.code, 1);
  const json e = o.err_json()["error"];
  EXPECT_EQ(e["type"], "ConfigSchemaError");
  EXPECT_EQ(e["key"], "dataset_name");
}

TEST(Cli, UnknownKeyIsRejected) {
  TempDir dir;
  const auto cfg = write_config(dir, "p.yaml",
                                "dataset_name: UADFV\ndataset_root_path: " + dir.path().string() +
                                    "\nnum_frame: 4\n");
  const Outcome o = dfkit_cli({"preprocess", "--config", cfg.string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_EQ(o.err_json()["error"]["key"], "num_frame");
}

TEST(Cli, BadValueNamesTheKey) {
  TempDir dir;
  const auto cfg = write_config(dir, "p.yaml",
                                "dataset_name: UADFV\ndataset_root_path: " + dir.path().string() +
                                    "\nmode: fixed_stride\nstride: 0\n");
  EXPECT_EQ(dfkit_cli({"preprocess", "--config", cfg.string()}).err_json()["error"]["key"], "stride");
}

TEST(Cli, PreprocessWritesFoldersAndRunManifest) {
  TempDir dir;
  const fs::path root = dir / "uadfv";
  make_uadfv_raw(root);
  const auto cfg = write_config(dir, "p.yaml",
                                "dataset_name: UADFV\ndataset_root_path: " + root.string() +
                                    "\nmode: fixed_num_frames\nnum_frames: 4\n");
  const Outcome o = dfkit_cli({"preprocess", "--config", cfg.string(), "--seed", "3", "--workers", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* v : {"real/faces/r1", "real/faces/r2", "fake/faces/f1"}) {
    EXPECT_TRUE(fs::is_directory(root / v / "frames")) << v;
    EXPECT_TRUE(fs::is_directory(root / v / "landmarks")) << v;
  }
  EXPECT_FALSE(fs::exists(root / "real/faces/r1/masks"));
  EXPECT_TRUE(fs::is_directory(root / "fake/faces/f1/masks"));

  const json m = json::parse(testing::read_file(root / "run_manifest.preprocess.json"));
  EXPECT_EQ(m["command"], "preprocess");
  EXPECT_EQ(m["seed"], 3);
  EXPECT_EQ(m["workers"], 2);
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["config"]["num_frames"], 4);
  EXPECT_EQ(m["config"]["dataset_name"], "UADFV");
  EXPECT_TRUE(m["versions"].contains("opencv"));
  EXPECT_TRUE(fs::exists(root / "preprocess.log"));
}

TEST(Cli, RerunManifestDiffersOnlyInTiming) {
  TempDir dir;
  const fs::path root = dir / "uadfv";
  make_uadfv_raw(root);
  const auto cfg = write_config(dir, "p.yaml",
                                "dataset_name: UADFV\ndataset_root_path: " + root.string() +
                                    "\nmode: fixed_stride\nstride: 3\n");
  auto once = [&] {
    EXPECT_EQ(dfkit_cli({"preprocess", "--config", cfg.string(), "--seed", "5"}).code, 0);
    json m = json::parse(testing::read_file(root / "run_manifest.preprocess.json"));
    m.erase("started_at");
    m.erase("wall_time_seconds");
    return m;
  };
  const json a = once();
  const auto tree = testing::tree_bytes(root, [](const fs::path& p) {
    return p.filename() == "preprocess.log" || p.filename() == "run_manifest.preprocess.json";
  });
  EXPECT_EQ(once(), a);
  EXPECT_EQ(testing::tree_bytes(root, [](const fs::path& p) {
              return p.filename() == "preprocess.log" || p.filename() == "run_manifest.preprocess.json";
            }),
            tree);
}

TEST(Cli, PartialFailureExitsTwo) {
  TempDir dir;
  const fs::path root = dir / "uadfv";
  make_uadfv_raw(root);
  fs::create_directories(root / "fake/videos/broken");  // no frames
  const auto cfg = write_config(dir, "p.yaml",
                                "dataset_name: UADFV\ndataset_root_path: " + root.string() + "\n");
  const Outcome o = dfkit_cli({"preprocess", "--config", cfg.string()});
  EXPECT_EQ(o.code, 2);
  const json e = o.err_json();
  EXPECT_EQ(e["status"], "partial");
  ASSERT_EQ(e["failures"].size(), 1u);
  EXPECT_NE(e["failures"][0].get<std::string>().find("broken"), std::string::npos);
  EXPECT_EQ(json::parse(testing::read_file(root / "run_manifest.preprocess.json"))["exit_code"], 2);
}

TEST(Cli, ArrangeWritesManifest) {
  TempDir dir;
  testing::make_celebdf_toy(dir / "celeb");
  const fs::path out = dir / "out/Celeb-DF-v1.json";
  const auto cfg = write_config(dir, "a.yaml",
                                "dataset_name: Celeb-DF-v1\ndataset_root_path: " + (dir / "celeb").string() +
                                    "\noutput_file_path: " + out.string() + "\n");
  const Outcome o = dfkit_cli({"arrange", "--config", cfg.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const DatasetManifest m = load_manifest(out);
  EXPECT_EQ(serialize_split(m, Label::kFake, Split::kValidation), serialize_split(m, Label::kFake, Split::kTest));
  EXPECT_TRUE(fs::exists(dir / "out/Celeb-DF-v1.json.run.json"));
}

TEST(Cli, ArrangeRequiresCompForFaceForensics) {
  TempDir dir;
  testing::make_ff_toy(dir / "ff", "c23");
  const auto cfg = write_config(dir, "a.yaml",
                                "dataset_name: FaceForensics++\ndataset_root_path: " + (dir / "ff").string() +
                                    "\noutput_file_path: " + (dir / "ff.json").string() + "\n");
  const Outcome o = dfkit_cli({"arrange", "--config", cfg.string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_EQ(o.err_json()["error"]["key"], "comp");
}

std::vector<PredictionRecord> toy_predictions(const std::string& dataset, double shift, bool both_classes) {
  std::vector<PredictionRecord> out;
  for (int i = 0; i < 10; ++i) {
    const int label = both_classes ? i % 2 : 0;
    const double score = std::clamp(0.1 * i + (label ? shift : -shift), 0.0, 1.0);
    out.push_back({"f" + std::to_string(i), "v" + std::to_string(i / 3), dataset, score, label, ""});
  }
  return out;
}

TEST(Cli, EvalWritesReportCurvesAndTable) {
  TempDir dir;
  for (int k = 0; k < 4; ++k) {
    auto recs = toy_predictions("FF++", 0.05 * k, true);
    const auto only_real = toy_predictions("Real-only", 0.0, false);
    recs.insert(recs.end(), only_real.begin(), only_real.end());
    testing::write_file(dir / ("ckpt" + std::to_string(k) + ".csv"), write_prediction_dump(recs, DumpFormat::kCsv));
  }
  const auto cfg = write_config(dir, "e.yaml",
                                "predictions:\n  - " + (dir / "ckpt0.csv").string() + "\n  - " +
                                    (dir / "ckpt1.csv").string() + "\n  - " + (dir / "ckpt2.csv").string() +
                                    "\n  - " + (dir / "ckpt3.csv").string() + "\noutput_dir: " +
                                    (dir / "eval").string() + "\n");
  const Outcome o = dfkit_cli({"eval", "--config", cfg.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("top3_auc"), std::string::npos);
  EXPECT_NE(o.out.find("n/a"), std::string::npos);
  const json report = json::parse(testing::read_file(dir / "eval/report.json"));
  EXPECT_EQ(report["groups"].size(), 8u);
  EXPECT_TRUE(fs::exists(dir / "eval/report.txt"));
  EXPECT_TRUE(fs::exists(dir / "eval/top3.json"));
  std::size_t rocs = 0;
  for (const auto& e : fs::directory_iterator(dir / "eval/curves")) {
    rocs += e.path().filename().string().ends_with("_roc.csv");
  }
  EXPECT_EQ(rocs, 4u);  // Real-only has no ROC
}

TEST(Cli, EvalSingleDumpAndBadFile) {
  TempDir dir;
  testing::write_file(dir / "p.jsonl",
                      write_prediction_dump(toy_predictions("DFDC", 0.2, true), DumpFormat::kJsonLines));
  testing::write_file(dir / "bad.csv", "frame_id,video_id\n");
  const auto one = write_config(dir, "e1.yaml",
                                "predictions: " + (dir / "p.jsonl").string() + "\noutput_dir: " +
                                    (dir / "e1").string() + "\nthreshold: 0.4\n");
  const Outcome a = dfkit_cli({"eval", "--config", one.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out.find("top3_auc"), std::string::npos);
  EXPECT_EQ(json::parse(testing::read_file(dir / "e1/report.json"))["groups"][0]["threshold"], 0.4);

  const auto two = write_config(dir, "e2.yaml",
                                "predictions: [" + (dir / "p.jsonl").string() + ", " + (dir / "bad.csv").string() +
                                    "]\noutput_dir: " + (dir / "e2").string() + "\n");
  const Outcome b = dfkit_cli({"eval", "--config", two.string()});
  EXPECT_EQ(b.code, 2);
  EXPECT_EQ(b.err_json()["status"], "partial");
}

TEST(Cli, ReportTableFormatting) {
  std::map<GroupKey, MetricReport> reports;
  MetricReport r;
  r.n_pos = 3;
  r.n_neg = 0;
  r.acc = 1.0;
  reports[{"X", ""}] = r;
  const std::string table = cli::format_report_table(reports);
  EXPECT_NE(table.find("n/a"), std::string::npos);
  EXPECT_NE(table.find("1.0000"), std::string::npos);
  EXPECT_EQ(table.find("top3_auc"), std::string::npos);
}

TEST(Cli, SynthesizeFwaIsReproducible) {
  TempDir dir;
  testing::make_ff_toy(dir / "ff", "c23");
  const fs::path manifest = dir / "ff.json";
  ASSERT_EQ(dfkit_cli({"arrange", "--config",
                       write_config(dir, "a.yaml",
                                    "dataset_name: FaceForensics++\ndataset_root_path: " + (dir / "ff").string() +
                                        "\noutput_file_path: " + manifest.string() + "\ncomp: c23\n")
                           .string()})
                .code,
            0);
  auto synth = [&](const std::string& method, const std::string& out, unsigned workers) {
    const auto cfg = write_config(dir, method + ".yaml",
                                  "method: " + method + "\nmanifest_path: " + manifest.string() +
                                      "\ndataset_root_path: " + (dir / "ff").string() + "\noutput_dir: " +
                                      (dir / out).string() + "\ncount: 4\nneighbours: 2\n");
    return dfkit_cli({"synthesize", "--config", cfg.string(), "--seed", "9", "--workers",
                      std::to_string(workers)});
  };
  for (const std::string method : {"fwa", "xray"}) {
    const Outcome a = synth(method, method + "_a", 1);
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(synth(method, method + "_b", 4).code, 0);
    const auto skip = [](const fs::path& p) { return p.extension() == ".log" || p.filename() == "run_manifest.json"; };
    const auto ta = testing::tree_bytes(dir / (method + "_a"), skip);
    EXPECT_EQ(ta, testing::tree_bytes(dir / (method + "_b"), skip));
    EXPECT_TRUE(ta.count("00000/forged.png"));
    EXPECT_TRUE(ta.count("00003/mask.png"));
    EXPECT_TRUE(ta.count("00003/boundary.png"));
    EXPECT_TRUE(ta.count("samples.jsonl"));
  }
}

TEST(Cli, AugmentPreviewWritesVariants) {
  TempDir dir;
  cv::Mat img(64, 80, CV_8UC3);
  cv::RNG(1).fill(img, cv::RNG::UNIFORM, 0, 256);
  fs::create_directories(dir / "in");
  cv::imwrite((dir / "in/face.png").string(), img);
  const auto cfg = write_config(dir, "g.yaml",
                                "input: " + (dir / "in").string() + "\noutput_dir: " + (dir / "out").string() +
                                    "\nvariants: 3\nflip_probability: 1.0\nrotate_limit: [-5, 5]\n"
                                    "quality_lower: 60\nquality_upper: 90\nblur_limit: [3, 5]\n");
  const Outcome o = dfkit_cli({"augment-preview", "--config", cfg.string(), "--seed", "4"});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* f : {"face_v00.png", "face_v01.png", "face_v02.png", "applied.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  std::istringstream lines(testing::read_file(dir / "out/applied.jsonl"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const json j = json::parse(line);
    for (const auto& op : j["ops"]) {
      if (op["kind"] == "hflip") EXPECT_TRUE(op["fired"].get<bool>());
      if (op["kind"] == "jpeg_compress" && op["fired"].get<bool>()) {
        EXPECT_GE(op["params"]["quality"].get<double>(), 60);
        EXPECT_LE(op["params"]["quality"].get<double>(), 90);
      }
    }
    ++n;
  }
  EXPECT_EQ(n, 3u);
}

TEST(Cli, SpectrumFromDirectories) {
  TempDir dir;
  fs::create_directories(dir / "real");
  fs::create_directories(dir / "fake");
  for (int i = 0; i < 3; ++i) {
    cv::Mat img(48, 48, CV_8UC3);
    cv::RNG(i).fill(img, cv::RNG::UNIFORM, 0, 256);
    cv::imwrite((dir / "real" / ("r" + std::to_string(i) + ".png")).string(), img);
    cv::imwrite((dir / "fake" / ("f" + std::to_string(i) + ".png")).string(), img);
  }
  const auto cfg = write_config(dir, "s.yaml",
                                "real_dir: " + (dir / "real").string() + "\nfake_dir: " + (dir / "fake").string() +
                                    "\noutput_dir: " + (dir / "spec").string() + "\nside: 32\n");
  const Outcome o = dfkit_cli({"spectrum", "--config", cfg.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* f : {"real_avg.png", "fake_avg.png", "difference.png", "difference.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "spec" / f)) << f;
  }
  // Identical sets: every difference entry is exactly zero.
  std::string text = testing::read_file(dir / "spec/difference.csv");
  std::replace(text.begin(), text.end(), '\n', ',');
  std::istringstream csv(text);
  std::string cell;
  std::size_t cells = 0;
  while (std::getline(csv, cell, ',')) {
    EXPECT_EQ(std::stod(cell), 0.0);
    ++cells;
  }
  EXPECT_EQ(cells, 32u * 32u);
}

}  // namespace
}  // namespace dfkit
