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

#ifndef DFKIT_TOOLS_IO_UTIL_HPP_
#define DFKIT_TOOLS_IO_UTIL_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

namespace dfkit::cli {

// Writes via a temporary sibling and a rename so readers never see a
// partial file. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_image_file(const std::filesystem::path& path, const cv::Mat& image);

// Throws DecodeFailure.
cv::Mat read_image_file(const std::filesystem::path& path, int flags);

// Image files (png, jpg, jpeg, bmp) directly inside `dir`, sorted; a file
// argument yields itself.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir_or_file);

// Stable file-name fragment: path separators and odd characters become '_'.
std::string slug(const std::string& text);

}  // namespace dfkit::cli

#endif  // DFKIT_TOOLS_IO_UTIL_HPP_
