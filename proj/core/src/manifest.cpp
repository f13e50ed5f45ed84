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

#include "dfkit/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "dfkit/error.hpp"
#include "json.hpp"

namespace dfkit {
namespace {

using nlohmann::json;

constexpr Label kLabels[] = {Label::kFake, Label::kReal};
constexpr Split kSplits[] = {Split::kTest, Split::kTrain, Split::kValidation};

json record_to_json(const VideoRecord& r) {
  json j = json::object();
  if (r.compression) j["compression"] = to_string(*r.compression);
  j["frame_paths"] = r.frame_paths;
  if (r.landmark_paths) j["landmark_paths"] = *r.landmark_paths;
  if (r.mask_paths) j["mask_paths"] = *r.mask_paths;
  if (r.method) j["method"] = *r.method;
  return j;
}

std::vector<std::string> string_list(const json& j, std::string_view what) {
  if (!j.is_array()) throw Error(ErrorCode::kParseError, std::string(what) + " must be a list");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) throw Error(ErrorCode::kParseError, std::string(what) + " holds a non-string");
    out.push_back(e.get<std::string>());
  }
  return out;
}

VideoRecord record_from_json(const json& j, std::string id, Label label, Split split) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "video " + id + " is not an object");
  VideoRecord r;
  r.video_id = std::move(id);
  r.label = label;
  r.split = split;
  if (!j.contains("frame_paths")) {
    throw Error(ErrorCode::kParseError, "video " + r.video_id + " lacks frame_paths");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "frame_paths") {
      r.frame_paths = string_list(value, key);
    } else if (key == "landmark_paths") {
      r.landmark_paths = string_list(value, key);
    } else if (key == "mask_paths") {
      r.mask_paths = string_list(value, key);
    } else if (key == "compression") {
      auto c = value.is_string() ? parse_compression(value.get<std::string>()) : std::nullopt;
      if (!c) throw Error(ErrorCode::kParseError, "bad compression for " + r.video_id);
      r.compression = c;
    } else if (key == "method") {
      if (!value.is_string()) throw Error(ErrorCode::kParseError, "bad method for " + r.video_id);
      r.method = value.get<std::string>();
    } else {
      throw Error(ErrorCode::kParseError, "unknown key \"" + key + "\" in video " + r.video_id);
    }
  }
  return r;
}

json split_subtree(const DatasetManifest& m, Label label, Split split) {
  json out = json::object();
  for (const auto& r : m.videos) {
    if (r.label == label && r.split == split) out[r.video_id] = record_to_json(r);
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string_view to_string(Label v) { return v == Label::kFake ? "fake" : "real"; }

std::string_view to_string(Split v) {
  switch (v) {
    case Split::kTest: return "test";
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
  }
  return "train";
}

std::string_view to_string(Compression v) {
  switch (v) {
    case Compression::kRaw: return "raw";
    case Compression::kC23: return "c23";
    case Compression::kC40: return "c40";
  }
  return "raw";
}

std::optional<Label> parse_label(std::string_view s) {
  if (s == "fake") return Label::kFake;
  if (s == "real") return Label::kReal;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  if (s == "validation") return Split::kValidation;
  return std::nullopt;
}

std::optional<Compression> parse_compression(std::string_view s) {
  if (s == "raw") return Compression::kRaw;
  if (s == "c23") return Compression::kC23;
  if (s == "c40") return Compression::kC40;
  return std::nullopt;
}

std::string_view to_string(ValidationIssue::Kind kind) {
  switch (kind) {
    case ValidationIssue::Kind::kMissingFile: return "missing_file";
    case ValidationIssue::Kind::kLengthMismatch: return "length_mismatch";
    case ValidationIssue::Kind::kDuplicateEntry: return "duplicate_entry";
  }
  return "missing_file";
}

std::string_view to_string(SplitRuleKind kind) {
  switch (kind) {
    case SplitRuleKind::kDuplicateAll: return "duplicate_all";
    case SplitRuleKind::kOfficialList: return "official_list";
    case SplitRuleKind::kValidationEqualsTest: return "validation_equals_test";
    case SplitRuleKind::kPerturbationSubset: return "perturbation_subset";
  }
  return "duplicate_all";
}

void DatasetManifest::sort_records() {
  std::stable_sort(videos.begin(), videos.end(), [](const VideoRecord& a, const VideoRecord& b) {
    return std::tie(a.label, a.split, a.video_id) < std::tie(b.label, b.split, b.video_id);
  });
}

std::string serialize_manifest(const DatasetManifest& manifest) {
  json videos = json::object();
  for (Label label : kLabels) {
    json by_split = json::object();
    for (Split split : kSplits) {
      json sub = split_subtree(manifest, label, split);
      if (!sub.empty()) by_split[std::string(to_string(split))] = std::move(sub);
    }
    if (!by_split.empty()) videos[std::string(to_string(label))] = std::move(by_split);
  }
  json doc = {{"dataset_name", manifest.dataset_name},
              {"schema_version", manifest.schema_version},
              {"videos", std::move(videos)}};
  return dump(doc);
}

std::string serialize_split(const DatasetManifest& manifest, Label label, Split split) {
  return dump(split_subtree(manifest, label, split));
}

DatasetManifest parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "manifest root must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "dataset_name" && key != "schema_version" && key != "videos") {
      throw Error(ErrorCode::kParseError, "unknown manifest key \"" + key + "\"");
    }
  }
  DatasetManifest m;
  if (!doc.contains("dataset_name") || !doc["dataset_name"].is_string()) {
    throw Error(ErrorCode::kParseError, "manifest lacks dataset_name");
  }
  m.dataset_name = doc["dataset_name"].get<std::string>();
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer()) {
    throw Error(ErrorCode::kParseError, "manifest lacks schema_version");
  }
  m.schema_version = doc["schema_version"].get<int>();
  if (m.schema_version > kManifestSchemaVersion) {
    throw Error(ErrorCode::kParseError,
                "schema_version " + std::to_string(m.schema_version) + " is newer than supported");
  }
  const json& videos = doc.contains("videos") ? doc["videos"] : json::object();
  if (!videos.is_object()) throw Error(ErrorCode::kParseError, "videos must be an object");
  for (const auto& [label_key, by_split] : videos.items()) {
    auto label = parse_label(label_key);
    if (!label || !by_split.is_object()) {
      throw Error(ErrorCode::kParseError, "bad label group \"" + label_key + "\"");
    }
    for (const auto& [split_key, records] : by_split.items()) {
      auto split = parse_split(split_key);
      if (!split || !records.is_object()) {
        throw Error(ErrorCode::kParseError, "bad split group \"" + split_key + "\"");
      }
      for (const auto& [id, rec] : records.items()) {
        m.videos.push_back(record_from_json(rec, id, *label, *split));
      }
    }
  }
  m.sort_records();
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << serialize_manifest(manifest);
}

ValidationReport validate_manifest(const DatasetManifest& manifest,
                                   const std::filesystem::path& root) {
  ValidationReport report;
  std::set<std::pair<std::string, Split>> seen;
  for (const auto& r : manifest.videos) {
    auto add = [&](ValidationIssue::Kind kind, std::string detail) {
      report.issues.push_back({kind, r.video_id, r.split, std::move(detail)});
    };
    if (!seen.emplace(r.video_id, r.split).second) {
      add(ValidationIssue::Kind::kDuplicateEntry, "repeated in split " + std::string(to_string(r.split)));
    }
    auto check_files = [&](const std::vector<std::string>& paths) {
      for (const auto& p : paths) {
        if (!std::filesystem::exists(root / p)) add(ValidationIssue::Kind::kMissingFile, p);
      }
    };
    check_files(r.frame_paths);
    for (const auto* extra : {&r.landmark_paths, &r.mask_paths}) {
      if (!*extra) continue;
      if ((*extra)->size() != r.frame_paths.size()) {
        add(ValidationIssue::Kind::kLengthMismatch,
            std::string(extra == &r.landmark_paths ? "landmark_paths" : "mask_paths") + " has " +
                std::to_string((*extra)->size()) + " entries, frame_paths has " +
                std::to_string(r.frame_paths.size()));
      }
      check_files(**extra);
    }
  }
  return report;
}

std::vector<VideoRecord> query_split(const DatasetManifest& manifest, Split split,
                                     std::optional<Label> label_filter) {
  std::vector<VideoRecord> out;
  for (const auto& r : manifest.videos) {
    if (r.split == split && (!label_filter || r.label == *label_filter)) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const VideoRecord& a, const VideoRecord& b) {
    return std::tie(a.video_id, a.label) < std::tie(b.video_id, b.label);
  });
  return out;
}

}  // namespace dfkit
