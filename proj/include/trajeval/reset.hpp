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
#include <functional>
#include <string>
#include <vector>

#include "trajeval/evalengine.hpp"
#include "trajeval/rational.hpp"
#include "trajeval/simenv.hpp"
#include "trajeval/trajectory.hpp"

namespace trajeval {

/// One inverse task to run after a benchmark pass. App-level jobs are
/// shared: they appear once per epoch however many tasks they serve.
struct ResetJob {
  std::string reset_task_id;
  ResetCategory category = ResetCategory::TaskLevel;
  std::vector<std::string> serves;  // benchmark task_ids
  const TaskSpec* reset_spec = nullptr;
};

struct EpochPlan {
  std::vector<std::string> benchmark_order;
  std::vector<ResetJob> jobs;  // benchmark order, app-level deduplicated
};

/// Task-level jobs in benchmark order, then each distinct app-level job
/// once (order of first appearance). None/Infeasible tasks contribute
/// nothing. Throws Error{DanglingResetRef} for unresolved links.
EpochPlan plan_epoch(const TaskCorpus& corpus);

struct ResetJobResult {
  std::string reset_task_id;
  ResetCategory category = ResetCategory::TaskLevel;
  std::vector<std::string> serves;
  Outcome outcome = Outcome::Failure;
  bool all_matched = false;
};

struct ResetReport {
  std::vector<ResetJobResult> jobs;
  /// Fraction of jobs with all conditions matched; restoration counts even
  /// when the agent over-ran its step limit.
  Ratio reset_sr;
  /// Per-app digest check after the epoch's resets, when an env digest
  /// baseline is available (mock runs).
  std::map<std::string, bool> restored;
};

struct ResetRunOutcome {
  Outcome outcome = Outcome::Failure;
  bool all_matched = false;
};

/// Runs every job through `run_reset_task` (the harness loop bound to an
/// agent and env) and aggregates. Kept callback-shaped so the reset layer
/// stays independent of the harness.
ResetReport execute_resets(
    const EpochPlan& plan,
    const std::function<ResetRunOutcome(const TaskSpec&)>& run_reset_task);

/// Digest equality with the pre-epoch baseline; mock envs only.
bool verify_restoration(const DeviceEnv& env, std::uint64_t baseline_digest);

}  // namespace trajeval
