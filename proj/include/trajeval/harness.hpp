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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trajeval/agents.hpp"
#include "trajeval/noise.hpp"
#include "trajeval/rational.hpp"
#include "trajeval/report.hpp"
#include "trajeval/simenv.hpp"

namespace trajeval {

struct RunConfig {
  Ratio step_multiplier{3, 1};
  // Post-action wait for live adapters; the mock env does not model time,
  // so scripted runs keep this at 0.
  int wait_ms = 0;
  NoiseConfig noise;  // applies to noise_robust tasks when probability > 0
  int epochs = 1;
  int runs_per_task = 1;
  int workers = 1;
  std::string output_dir;  // empty: keep everything in memory
  AgentSpec agent;
  std::uint64_t seed = 0;

  std::int64_t step_limit(int golden_steps) const {
    return step_multiplier.ceil_times(golden_steps);
  }

  void validate() const;
};

struct TaskAttempt {
  Trajectory trajectory;
  TaskResult result;
};

/// The single-step loop: observe (noise-aware) -> decide -> translate ->
/// execute, until a finished action or the step cap
/// ceil(step_multiplier x golden_steps). Untranslatable agent output burns
/// the step as a wait() tagged with the error. An adapter that throws
/// truncates the trajectory with termination step_limit. The trajectory is
/// then matched and classified.
///
/// Precondition: env is positioned at the task app's initial page.
TaskAttempt run_task(const TaskSpec& task, AgentAdapter& agent, DeviceEnv& env,
                     const RunConfig& config, std::uint64_t noise_seed,
                     int epoch = 0, int run = 0);

/// run_task with an owned scripted agent; the mock-env entry point used by
/// fixtures and tests.
TaskAttempt run_scripted(AgentAdapter& agent, DeviceEnv& env, const TaskSpec& task,
                         const RunConfig& config, std::uint64_t noise_seed = 0);

/// Full benchmark: epochs x runs x tasks over per-app envs (state flags
/// persist across tasks within an epoch), reset plan after each epoch with
/// a golden-replay agent, restoration check against pre-run digests,
/// aggregation, and (when output_dir is set) trajectory files, manifest,
/// report.json and summary.csv. Per-task failures are quarantined; corpus
/// and configuration errors throw.
RunReport run_benchmark(const TaskCorpus& corpus, const std::vector<MockApp>& apps,
                        const GoldenActions& golden, const RunConfig& config,
                        const std::optional<std::map<std::string, bool>>&
                            human_labels = std::nullopt);

/// Offline re-evaluation of a stored run: no env, no adapter. Reads the run
/// directory's manifest and trajectory files and rebuilds the RunReport;
/// with the same task file and labels the JSON is byte-identical to the
/// original. Throws Error{UnknownTaskId} for trajectories whose task is
/// gone from the task file.
RunReport reevaluate(const std::string& run_dir, const TaskCorpus& corpus,
                     const std::optional<std::map<std::string, bool>>&
                         human_labels = std::nullopt);

/// Human success labels keyed by task_id ({"task": true, ...}).
std::map<std::string, bool> load_human_labels(const std::string& path);

/// Builds the TaskResult for an already-recorded trajectory (the
/// re-evaluation path shares this with the live path).
TaskResult evaluate_trajectory(const Trajectory& trajectory, const TaskSpec& task,
                               int epoch, int run, const std::string& path);

}  // namespace trajeval
