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

#include "io_util.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <opencv2/imgcodecs.hpp>

#include "dfkit/error.hpp"

namespace dfkit::cli {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  fs::rename(tmp, path);
}

void write_image_file(const fs::path& path, const cv::Mat& image) {
  std::vector<uchar> bytes;
  const std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 3};
  if (!cv::imencode(path.extension().string(), image, bytes, params)) {
    throw Error(ErrorCode::kIoError, "cannot encode " + path.string());
  }
  write_text_file(path, std::string(bytes.begin(), bytes.end()));
}

cv::Mat read_image_file(const fs::path& path, int flags) {
  cv::Mat m = cv::imread(path.string(), flags);
  if (m.empty()) throw Error(ErrorCode::kDecodeFailure, "cannot decode " + path.string());
  return m;
}

std::vector<fs::path> list_images(const fs::path& dir_or_file) {
  if (fs::is_regular_file(dir_or_file)) return {dir_or_file};
  if (!fs::is_directory(dir_or_file)) throw Error(ErrorCode::kIoError, "no such file or directory: " + dir_or_file.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir_or_file)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string slug(const std::string& text) {
  std::string out = text;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  }
  return out;
}

}  // namespace dfkit::cli
