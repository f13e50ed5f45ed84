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
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dfkit/error.hpp"
#include "dfkit/manifest.hpp"
#include "json.hpp"

namespace dfkit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

SplitRule duplicate_all() { return {SplitRuleKind::kDuplicateAll, SplitSourceFormat::kNone, {}}; }

SplitRule ff_pairs() {
  return {SplitRuleKind::kOfficialList, SplitSourceFormat::kFaceForensicsPairs, fs::path("splits")};
}

std::vector<DatasetLayout> build_layouts() {
  std::vector<DatasetLayout> out;

  DatasetLayout ff{"FaceForensics++", true, false, {}};
  ff.groups.push_back({"original_sequences/youtube/{comp}", "youtube", Label::kReal, std::nullopt,
                       duplicate_all()});
  for (const char* m : {"Deepfakes", "Face2Face", "FaceSwap", "NeuralTextures"}) {
    ff.groups.push_back({std::string("manipulated_sequences/") + m + "/{comp}", m, Label::kFake,
                         std::string(m), ff_pairs()});
  }
  out.push_back(ff);

  DatasetLayout dfd{"DeepFakeDetection", true, false, {}};
  dfd.groups.push_back({"original_sequences/actors/{comp}", "actors", Label::kReal, std::nullopt,
                        duplicate_all()});
  dfd.groups.push_back({"manipulated_sequences/DeepFakeDetection/{comp}", "DeepFakeDetection",
                        Label::kFake, std::string("DeepFakeDetection"), duplicate_all()});
  out.push_back(dfd);

  DatasetLayout fsh{"FaceShifter", true, false, {}};
  fsh.groups.push_back({"original_sequences/youtube/{comp}", "youtube", Label::kReal, std::nullopt,
                        duplicate_all()});
  fsh.groups.push_back({"manipulated_sequences/FaceShifter/{comp}", "FaceShifter", Label::kFake,
                        std::string("FaceShifter"), ff_pairs()});
  out.push_back(fsh);

  for (const char* name : {"Celeb-DF-v1", "Celeb-DF-v2"}) {
    const SplitRule rule{SplitRuleKind::kValidationEqualsTest, SplitSourceFormat::kTestList,
                         fs::path("List_of_testing_videos.txt")};
    DatasetLayout cdf{name, false, false, {}};
    cdf.groups.push_back({"Celeb-real", "Celeb-real", Label::kReal, std::nullopt, rule});
    cdf.groups.push_back({"YouTube-real", "YouTube-real", Label::kReal, std::nullopt, rule});
    cdf.groups.push_back({"Celeb-synthesis", "Celeb-synthesis", Label::kFake,
                          std::string("Celeb-synthesis"), rule});
    out.push_back(cdf);
  }

  {
    const SplitRule rule{SplitRuleKind::kValidationEqualsTest, SplitSourceFormat::kSetMetadata,
                         fs::path("dataset.json")};
    DatasetLayout dfdcp{"DFDCP", false, false, {}};
    dfdcp.groups.push_back({"original_videos", "original", Label::kReal, std::nullopt, rule});
    dfdcp.groups.push_back({"method_A", "method_A", Label::kFake, std::string("method_A"), rule});
    dfdcp.groups.push_back({"method_B", "method_B", Label::kFake, std::string("method_B"), rule});
    out.push_back(dfdcp);
  }

  {
    const SplitRule rule{SplitRuleKind::kValidationEqualsTest, SplitSourceFormat::kGroupDirectory,
                         std::nullopt};
    DatasetLayout dfdc{"DFDC", false, false, {}};
    dfdc.groups.push_back({"train/real", "train_real", Label::kReal, std::nullopt, rule});
    dfdc.groups.push_back({"train/fake", "train_fake", Label::kFake, std::nullopt, rule});
    dfdc.groups.push_back({"test/real", "test_real", Label::kReal, std::nullopt, rule});
    dfdc.groups.push_back({"test/fake", "test_fake", Label::kFake, std::nullopt, rule});
    out.push_back(dfdc);
  }

  DatasetLayout dfo{"DeeperForensics-1.0", false, true, {}};
  dfo.groups.push_back({"source_videos", "source", Label::kReal, std::nullopt, duplicate_all()});
  dfo.groups.push_back({"manipulated_videos/{perturbation}", "{perturbation}", Label::kFake,
                        std::string("{perturbation}"),
                        {SplitRuleKind::kPerturbationSubset, SplitSourceFormat::kFileLists,
                         fs::path("lists/splits")}});
  out.push_back(dfo);

  DatasetLayout uadfv{"UADFV", false, false, {}};
  uadfv.groups.push_back({"real", "real", Label::kReal, std::nullopt, duplicate_all()});
  uadfv.groups.push_back({"fake", "fake", Label::kFake, std::nullopt, duplicate_all()});
  out.push_back(uadfv);

  return out;
}

const std::vector<DatasetLayout>& layouts() {
  static const std::vector<DatasetLayout> all = build_layouts();
  return all;
}

std::string substitute(std::string s, std::string_view key, std::string_view value) {
  for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) {
    s.replace(pos, key.size(), value);
  }
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kSplitListMissing, "cannot read split source " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_source(const fs::path& p) {
  try {
    return json::parse(slurp(p));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, p.string() + ": " + e.what());
  }
}

// "<dir>/<file>.<ext>" -> "<dir>/<file-stem>".
std::string entry_key(std::string_view entry) {
  fs::path p{std::string(entry)};
  return (p.parent_path() / p.stem()).generic_string();
}

// Split membership keyed by "<group path>/<stem>" or bare stem.
struct SplitTable {
  std::map<std::string, std::set<Split>> by_key;
  bool train_is_everything = false;
};

void require(const fs::path& p) {
  if (!fs::exists(p)) throw Error(ErrorCode::kSplitListMissing, "split source missing: " + p.string());
}

SplitTable load_split_table(const SplitRule& rule, const fs::path& root) {
  SplitTable table;
  if (!rule.source) return table;
  const fs::path src = root / *rule.source;
  require(src);
  switch (rule.format) {
    case SplitSourceFormat::kFaceForensicsPairs: {
      const std::pair<const char*, Split> files[] = {
          {"train.json", Split::kTrain}, {"val.json", Split::kValidation}, {"test.json", Split::kTest}};
      for (const auto& [file, split] : files) {
        require(src / file);
        const json pairs = parse_json_source(src / file);
        if (!pairs.is_array()) throw Error(ErrorCode::kParseError, (src / file).string() + ": not a list");
        for (const auto& pair : pairs) {
          if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
            throw Error(ErrorCode::kParseError, (src / file).string() + ": entries must be id pairs");
          }
          const auto a = pair[0].get<std::string>();
          const auto b = pair[1].get<std::string>();
          for (const auto& stem : {a, b, a + "_" + b, b + "_" + a}) table.by_key[stem].insert(split);
        }
      }
      break;
    }
    case SplitSourceFormat::kTestList: {
      table.train_is_everything = true;
      std::istringstream lines(slurp(src));
      std::string line;
      while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string label, path;
        if (!(fields >> label >> path)) continue;
        table.by_key[entry_key(path)].insert(Split::kTest);
      }
      break;
    }
    case SplitSourceFormat::kSetMetadata: {
      const json meta = parse_json_source(src);
      if (!meta.is_object()) throw Error(ErrorCode::kParseError, src.string() + ": not an object");
      for (const auto& [path, info] : meta.items()) {
        if (!info.is_object() || !info.contains("set") || !info["set"].is_string()) continue;
        const auto set = info["set"].get<std::string>();
        if (set == "train") table.by_key[entry_key(path)].insert(Split::kTrain);
        if (set == "test") table.by_key[entry_key(path)].insert(Split::kTest);
      }
      break;
    }
    case SplitSourceFormat::kFileLists: {
      const std::pair<const char*, Split> files[] = {
          {"train.txt", Split::kTrain}, {"val.txt", Split::kValidation}, {"test.txt", Split::kTest}};
      for (const auto& [file, split] : files) {
        require(src / file);
        std::istringstream lines(slurp(src / file));
        std::string line;
        while (std::getline(lines, line)) {
          std::istringstream fields(line);
          std::string name;
          if (fields >> name) table.by_key[fs::path(name).stem().string()].insert(split);
        }
      }
      break;
    }
    case SplitSourceFormat::kNone:
    case SplitSourceFormat::kGroupDirectory:
      break;
  }
  return table;
}

std::set<Split> splits_for(const GroupLayout& group, const std::string& group_path,
                           const std::string& stem, const SplitTable& table) {
  const SplitRule& rule = group.rule;
  if (rule.kind == SplitRuleKind::kDuplicateAll) {
    return {Split::kTrain, Split::kTest, Split::kValidation};
  }
  std::set<Split> out;
  if (rule.format == SplitSourceFormat::kGroupDirectory) {
    const auto first = fs::path(group_path).begin()->string();
    if (auto s = parse_split(first)) out.insert(*s);
  } else {
    for (const auto& key : {group_path + "/" + stem, stem}) {
      if (auto it = table.by_key.find(key); it != table.by_key.end()) {
        out.insert(it->second.begin(), it->second.end());
      }
    }
    if (table.train_is_everything) out.insert(Split::kTrain);
  }
  if (rule.kind == SplitRuleKind::kValidationEqualsTest) {
    out.erase(Split::kValidation);
    if (out.contains(Split::kTest)) out.insert(Split::kValidation);
  }
  return out;
}

std::vector<std::string> sorted_files(const fs::path& dir, const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

const DatasetLayout* find_dataset_layout(std::string_view name) {
  for (const auto& l : layouts()) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

std::vector<std::string> supported_datasets() {
  std::vector<std::string> names;
  for (const auto& l : layouts()) names.push_back(l.name);
  return names;
}

DatasetManifest arrange_dataset(const ArrangeConfig& config) {
  const DatasetLayout* layout = find_dataset_layout(config.dataset_name);
  if (!layout) throw Error(ErrorCode::kUnknownDataset, "dataset_name \"" + config.dataset_name + "\"");
  const fs::path& root = config.dataset_root_path;
  if (!fs::is_directory(root)) throw Error(ErrorCode::kMissingRoot, root.string());

  std::optional<Compression> compression;
  if (layout->uses_compression) {
    if (!config.comp) throw Error(ErrorCode::kInvalidArgument, "comp is required for " + layout->name);
    compression = parse_compression(*config.comp);
    if (!compression) throw Error(ErrorCode::kInvalidArgument, "comp must be raw, c23 or c40");
  }
  const std::string perturbation = config.perturbation.value_or("end_to_end");

  DatasetManifest manifest;
  manifest.dataset_name = layout->name;
  std::map<fs::path, SplitTable> tables;

  for (const auto& group : layout->groups) {
    std::string group_path = group.path;
    if (compression) group_path = substitute(group_path, "{comp}", to_string(*compression));
    group_path = substitute(group_path, "{perturbation}", perturbation);
    const fs::path faces = root / group_path / "faces";
    if (!fs::is_directory(faces)) continue;

    const SplitTable* table = nullptr;
    if (group.rule.source) {
      auto it = tables.find(*group.rule.source);
      if (it == tables.end()) {
        it = tables.emplace(*group.rule.source, load_split_table(group.rule, root)).first;
      }
      table = &it->second;
    }
    static const SplitTable kEmpty;

    std::vector<fs::path> video_dirs;
    for (const auto& e : fs::directory_iterator(faces)) {
      if (e.is_directory()) video_dirs.push_back(e.path());
    }
    std::sort(video_dirs.begin(), video_dirs.end());

    const std::string tag = substitute(group.tag, "{perturbation}", perturbation);
    std::optional<std::string> method;
    if (group.method) method = substitute(*group.method, "{perturbation}", perturbation);

    for (const auto& dir : video_dirs) {
      const std::string stem = dir.filename().string();
      VideoRecord base;
      base.video_id = tag + "/" + stem;
      base.label = group.label;
      base.frame_paths = sorted_files(dir / "frames", root);
      if (base.frame_paths.empty()) continue;
      if (auto lm = sorted_files(dir / "landmarks", root); !lm.empty()) base.landmark_paths = lm;
      if (fs::is_directory(dir / "masks")) base.mask_paths = sorted_files(dir / "masks", root);
      base.compression = compression;
      base.method = method;
      for (Split split : splits_for(group, group_path, stem, table ? *table : kEmpty)) {
        VideoRecord r = base;
        r.split = split;
        manifest.videos.push_back(std::move(r));
      }
    }
  }

  if (manifest.videos.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no videos found under " + root.string());
  }
  manifest.sort_records();
  if (!config.output_file_path.empty()) save_manifest(config.output_file_path, manifest);
  return manifest;
}

}  // namespace dfkit
