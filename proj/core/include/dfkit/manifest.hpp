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

#ifndef DFKIT_MANIFEST_HPP_
#define DFKIT_MANIFEST_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dfkit {

enum class Label { kFake, kReal };
enum class Split { kTest, kTrain, kValidation };
enum class Compression { kRaw, kC23, kC40 };

std::string_view to_string(Label v);
std::string_view to_string(Split v);
std::string_view to_string(Compression v);
std::optional<Label> parse_label(std::string_view s);
std::optional<Split> parse_split(std::string_view s);
std::optional<Compression> parse_compression(std::string_view s);

struct VideoRecord {
  std::string video_id;
  Label label = Label::kReal;
  Split split = Split::kTrain;
  // Paths are relative to the dataset root.
  std::vector<std::string> frame_paths;
  std::optional<std::vector<std::string>> landmark_paths;
  std::optional<std::vector<std::string>> mask_paths;
  std::optional<Compression> compression;
  std::optional<std::string> method;

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

inline constexpr int kManifestSchemaVersion = 1;

struct DatasetManifest {
  std::string dataset_name;
  int schema_version = kManifestSchemaVersion;
  // Kept sorted by (label, split, video_id); see sort_records().
  std::vector<VideoRecord> videos;

  void sort_records();
  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

// Canonical JSON: sorted keys, two-space indent, LF newlines, trailing LF.
//   {"dataset_name": ..., "schema_version": 1,
//    "videos": {<label>: {<split>: {<video_id>: {
//        "compression"?, "frame_paths", "landmark_paths"?, "mask_paths"?,
//        "method"?}}}}}
std::string serialize_manifest(const DatasetManifest& manifest);
// Throws ParseError.
DatasetManifest parse_manifest(std::string_view text);
DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

// Canonical JSON for the subtree of one (label, split) pair.
std::string serialize_split(const DatasetManifest& manifest, Label label, Split split);

struct ValidationIssue {
  enum class Kind { kMissingFile, kLengthMismatch, kDuplicateEntry };
  Kind kind;
  std::string video_id;
  Split split;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

std::string_view to_string(ValidationIssue::Kind kind);

// Reports every missing file under `root`, every landmark/mask list whose
// length differs from frame_paths, and every repeated (video_id, split).
ValidationReport validate_manifest(const DatasetManifest& manifest,
                                   const std::filesystem::path& root);

// Records of one split, optionally one label, ordered by video_id.
std::vector<VideoRecord> query_split(const DatasetManifest& manifest, Split split,
                                     std::optional<Label> label_filter = std::nullopt);

// ---------------------------------------------------------------------------
// Arrangement

enum class SplitRuleKind {
  kDuplicateAll,
  kOfficialList,
  kValidationEqualsTest,
  kPerturbationSubset,
};

// How the split source file is read.
enum class SplitSourceFormat {
  kNone,
  kFaceForensicsPairs,    // splits/{train,val,test}.json: [["953","974"], ...]
  kTestList,              // "<label> <group>/<file>" lines; train = everything
  kSetMetadata,           // {"<group>/<file>": {"set": "train"|"test"}, ...}
  kGroupDirectory,        // split taken from the group's first path component
  kFileLists,             // <dir>/{train,val,test}.txt, one file name per line
};

struct SplitRule {
  SplitRuleKind kind = SplitRuleKind::kDuplicateAll;
  SplitSourceFormat format = SplitSourceFormat::kNone;
  std::optional<std::filesystem::path> source;  // relative to the dataset root
};

std::string_view to_string(SplitRuleKind kind);

// One directory of preprocessed videos: <root>/<path>/faces/<stem>/.
struct GroupLayout {
  std::string path;  // may contain {comp} and {perturbation}
  std::string tag;   // prefix of video ids from this group
  Label label;
  std::optional<std::string> method;  // "{perturbation}" is substituted
  SplitRule rule;
};

struct DatasetLayout {
  std::string name;
  bool uses_compression = false;   // the FF++ family
  bool uses_perturbation = false;  // DeeperForensics-1.0
  std::vector<GroupLayout> groups;
};

const DatasetLayout* find_dataset_layout(std::string_view name);
std::vector<std::string> supported_datasets();

struct ArrangeConfig {
  std::string dataset_name;
  std::filesystem::path dataset_root_path;
  std::filesystem::path output_file_path;
  std::optional<std::string> comp;
  std::optional<std::string> perturbation;
};

// Scans the preprocessed tree, applies each group's split rule and writes
// the canonical manifest to output_file_path (when non-empty).
// Throws UnknownDataset, MissingRoot, EmptyDataset, SplitListMissing, or
// InvalidArgument (bad or missing comp for the FF++ family).
DatasetManifest arrange_dataset(const ArrangeConfig& config);

}  // namespace dfkit

#endif  // DFKIT_MANIFEST_HPP_
