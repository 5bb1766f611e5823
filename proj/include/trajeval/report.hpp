/*
 * Copyright 2026 The trajeval Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajeval/metrics.hpp"
#include "trajeval/reset.hpp"

namespace trajeval {

/// Everything one benchmark run (or offline re-evaluation) produces.
/// Serialization is deterministic: regenerating metrics from the stored
/// trajectories reproduces the emitted JSON byte for byte.
struct RunReport {
  nlohmann::json config_echo;
  std::uint64_t seed = 0;
  std::vector<TaskResult> task_results;  // epoch-major, run, then task order
  ResetReport reset;
  std::optional<AgreementReport> agreement;
};

nlohmann::json ratio_json(const Ratio& ratio);
nlohmann::json percent_json(const Ratio& ratio);

nlohmann::json task_result_json(const TaskResult& result);
TaskResult task_result_from_json(const nlohmann::json& object);

/// Full-detail report: config echo, per-task results, aggregates (overall,
/// per subset, per difficulty, per subset x difficulty, per fired noise
/// type), pass@k when the run had retries, the reset section, and the
/// agreement section when human labels were supplied.
nlohmann::json report_to_json(const RunReport& report);

/// One CSV row per populated subset x difficulty bucket:
/// subset,difficulty,n,sr,sub_sr,mean_step_ratio + outcome fractions,
/// percentages with two decimals.
std::string report_summary_csv(const RunReport& report);

/// success_matrix rows in task order over all (epoch, run) attempts.
std::vector<std::vector<bool>> success_matrix(const std::vector<TaskResult>& results);

}  // namespace trajeval
