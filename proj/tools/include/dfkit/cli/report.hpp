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

#ifndef DFKIT_CLI_REPORT_HPP_
#define DFKIT_CLI_REPORT_HPP_

#include <map>
#include <string>

#include "dfkit/metrics.hpp"

namespace dfkit::cli {

// Fixed-width table, one row per group in key order. Undefined metrics print
// as n/a. A top3_auc column is added when some dataset has two or more
// checkpoints.
std::string format_report_table(const std::map<GroupKey, MetricReport>& reports);

}  // namespace dfkit::cli

#endif  // DFKIT_CLI_REPORT_HPP_
