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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dfkit/error.hpp"
#include "dfkit/metrics.hpp"
#include "json.hpp"

namespace dfkit {
namespace {

using nlohmann::json;

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what);
}

// RFC 4180 fields; quoted fields may hold commas and doubled quotes but not
// newlines.
std::vector<std::string> split_csv(std::string_view row, std::size_t line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const char c = row[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < row.size() && row[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) fail_line(line, "unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

double parse_score(std::string_view s, std::size_t line) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail_line(line, "bad score \"" + std::string(s) + "\"");
  return v;
}

void check(const PredictionRecord& r, std::size_t line) {
  if (r.frame_id.empty()) fail_line(line, "empty frame_id");
  if (!std::isfinite(r.score) || r.score < 0 || r.score > 1) fail_line(line, "score outside [0, 1]");
  if (r.label != 0 && r.label != 1) fail_line(line, "label must be 0 or 1");
}

std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t nl = text.find('\n');
    std::string_view row = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (row.find_first_not_of(" \t") == std::string_view::npos) continue;
    out.emplace_back(number, row);
  }
  return out;
}

std::vector<PredictionRecord> parse_csv(std::string_view text) {
  const auto rows = lines_of(text);
  if (rows.empty()) throw Error(ErrorCode::kParseError, "empty prediction dump");
  const auto header = split_csv(rows[0].second, rows[0].first);
  auto column = [&](const std::string& name, bool required) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
    }
    if (required) fail_line(rows[0].first, "missing column " + name);
    return -1;
  };
  const auto c_frame = column("frame_id", true);
  const auto c_video = column("video_id", true);
  const auto c_dataset = column("dataset", true);
  const auto c_score = column("score", true);
  const auto c_label = column("label", true);
  const auto c_ckpt = column("checkpoint", false);

  std::vector<PredictionRecord> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto [line, row] = rows[k];
    const auto f = split_csv(row, line);
    if (f.size() != header.size()) {
      fail_line(line, "expected " + std::to_string(header.size()) + " fields, got " +
                          std::to_string(f.size()));
    }
    PredictionRecord r;
    r.frame_id = f[c_frame];
    r.video_id = f[c_video];
    r.dataset = f[c_dataset];
    r.score = parse_score(f[c_score], line);
    if (f[c_label] == "0") {
      r.label = 0;
    } else if (f[c_label] == "1") {
      r.label = 1;
    } else {
      fail_line(line, "label must be 0 or 1");
    }
    if (c_ckpt >= 0) r.checkpoint = f[c_ckpt];
    check(r, line);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PredictionRecord> parse_jsonl(std::string_view text) {
  std::vector<PredictionRecord> out;
  for (const auto& [line, row] : lines_of(text)) {
    json j;
    try {
      j = json::parse(row);
    } catch (const json::exception& e) {
      fail_line(line, e.what());
    }
    if (!j.is_object()) fail_line(line, "expected an object");
    PredictionRecord r;
    try {
      r.frame_id = j.at("frame_id").get<std::string>();
      r.video_id = j.at("video_id").get<std::string>();
      r.dataset = j.at("dataset").get<std::string>();
      r.score = j.at("score").get<double>();
      const json& label = j.at("label");
      if (!label.is_number_integer()) fail_line(line, "label must be 0 or 1");
      r.label = label.get<int>();
      if (j.contains("checkpoint")) r.checkpoint = j.at("checkpoint").get<std::string>();
    } catch (const json::exception& e) {
      fail_line(line, e.what());
    }
    check(r, line);
    out.push_back(std::move(r));
  }
  if (out.empty()) throw Error(ErrorCode::kParseError, "empty prediction dump");
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::vector<PredictionRecord> parse_prediction_dump(std::string_view text, DumpFormat format) {
  return format == DumpFormat::kCsv ? parse_csv(text) : parse_jsonl(text);
}

std::vector<PredictionRecord> load_prediction_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto ext = path.extension().string();
  const DumpFormat format =
      ext == ".jsonl" || ext == ".ndjson" ? DumpFormat::kJsonLines : DumpFormat::kCsv;
  try {
    return parse_prediction_dump(buf.str(), format);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string write_prediction_dump(std::span<const PredictionRecord> records, DumpFormat format) {
  bool with_checkpoint = false;
  for (const auto& r : records) with_checkpoint |= !r.checkpoint.empty();
  std::string out;
  if (format == DumpFormat::kCsv) {
    out = with_checkpoint ? "frame_id,video_id,dataset,score,label,checkpoint\n"
                          : "frame_id,video_id,dataset,score,label\n";
    for (const auto& r : records) {
      out += csv_field(r.frame_id) + ',' + csv_field(r.video_id) + ',' + csv_field(r.dataset) + ',' +
             json(r.score).dump() + ',' + std::to_string(r.label);
      if (with_checkpoint) out += ',' + csv_field(r.checkpoint);
      out += '\n';
    }
    return out;
  }
  for (const auto& r : records) {
    json j = {{"frame_id", r.frame_id},
              {"video_id", r.video_id},
              {"dataset", r.dataset},
              {"score", r.score},
              {"label", r.label}};
    if (with_checkpoint) j["checkpoint"] = r.checkpoint;
    out += j.dump() + '\n';
  }
  return out;
}

std::string curve_to_csv(const CurveSeries& curve, std::string_view x_name, std::string_view y_name) {
  std::string out = std::string(x_name) + ',' + std::string(y_name) + '\n';
  for (const auto& p : curve.points) out += json(p.x).dump() + ',' + json(p.y).dump() + '\n';
  return out;
}

std::string report_to_json(const std::map<GroupKey, MetricReport>& reports) {
  json groups = json::array();
  for (const auto& [key, r] : reports) {
    groups.push_back({{"dataset", key.dataset},
                      {"checkpoint", key.checkpoint},
                      {"n_pos", r.n_pos},
                      {"n_neg", r.n_neg},
                      {"threshold", r.threshold},
                      {"acc", r.acc},
                      {"precision", r.precision},
                      {"recall", r.recall},
                      {"auc", optional_number(r.auc)},
                      {"ap", optional_number(r.ap)},
                      {"eer", optional_number(r.eer)},
                      {"eer_threshold", optional_number(r.eer_threshold)}});
  }
  json doc = {{"schema_version", 1}, {"groups", groups}};
  return doc.dump(2) + '\n';
}

}  // namespace dfkit
