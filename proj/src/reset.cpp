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

#include "trajeval/reset.hpp"

#include <map>

#include "trajeval/error.hpp"

namespace trajeval {

EpochPlan plan_epoch(const TaskCorpus& corpus) {
  EpochPlan plan;
  std::map<std::string, std::size_t> app_level_jobs;  // reset id -> job index
  for (const TaskSpec& task : corpus.tasks) {
    plan.benchmark_order.push_back(task.task_id);
    if (task.reset_category == ResetCategory::None ||
        task.reset_category == ResetCategory::Infeasible) {
      continue;
    }
    const TaskSpec* reset_spec = corpus.find_reset_task(*task.reset_task_id);
    if (!reset_spec) {
      throw Error(ErrorCode::DanglingResetRef,
                  "task \"" + task.task_id + "\" links to missing reset task \"" +
                      *task.reset_task_id + "\"");
    }
    if (task.reset_category == ResetCategory::AppLevel) {
      auto it = app_level_jobs.find(*task.reset_task_id);
      if (it != app_level_jobs.end()) {
        plan.jobs[it->second].serves.push_back(task.task_id);
        continue;
      }
      app_level_jobs[*task.reset_task_id] = plan.jobs.size();
    }
    ResetJob job;
    job.reset_task_id = *task.reset_task_id;
    job.category = task.reset_category;
    job.serves.push_back(task.task_id);
    job.reset_spec = reset_spec;
    plan.jobs.push_back(std::move(job));
  }
  return plan;
}

ResetReport execute_resets(
    const EpochPlan& plan,
    const std::function<ResetRunOutcome(const TaskSpec&)>& run_reset_task) {
  ResetReport report;
  std::int64_t restored_count = 0;
  for (const ResetJob& job : plan.jobs) {
    ResetRunOutcome run = run_reset_task(*job.reset_spec);
    ResetJobResult result;
    result.reset_task_id = job.reset_task_id;
    result.category = job.category;
    result.serves = job.serves;
    result.outcome = run.outcome;
    result.all_matched = run.all_matched;
    if (run.all_matched) ++restored_count;
    report.jobs.push_back(std::move(result));
  }
  report.reset_sr = plan.jobs.empty()
                        ? Ratio(1, 1)
                        : Ratio(restored_count,
                                static_cast<std::int64_t>(plan.jobs.size()));
  return report;
}

bool verify_restoration(const DeviceEnv& env, std::uint64_t baseline_digest) {
  return env.digest() == baseline_digest;
}

}  // namespace trajeval
