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

#include "trajeval/metrics.hpp"

#include "trajeval/error.hpp"

namespace trajeval {

std::string_view to_string(Difficulty difficulty) {
  switch (difficulty) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
  }
  return "";
}

Difficulty difficulty_by_steps(int golden_steps) {
  if (golden_steps < 8) return Difficulty::Easy;
  if (golden_steps <= 19) return Difficulty::Medium;
  return Difficulty::Hard;
}

Difficulty difficulty_by_weight(const std::vector<ExplorationAbility>& abilities) {
  int halves = 0;
  for (ExplorationAbility ability : abilities) {
    halves += ability_weight_halves(ability);
  }
  if (halves <= 2) return Difficulty::Easy;    // total weight <= 1
  if (halves <= 4) return Difficulty::Medium;  // 1 < total <= 2
  return Difficulty::Hard;                     // total > 2
}

Difficulty task_difficulty(const TaskSpec& task) {
  return task.subset == Subset::GuiReasoning
             ? difficulty_by_weight(task.exploration_abilities)
             : difficulty_by_steps(task.golden_steps);
}

Ratio step_ratio(int steps_taken, int golden_steps) {
  return Ratio(steps_taken, golden_steps);
}

namespace {

void require_nonempty(const std::vector<TaskResult>& results) {
  if (results.empty()) {
    throw Error(ErrorCode::EmptyResultSet, "no task results to aggregate");
  }
}

}  // namespace

Ratio success_rate(const std::vector<TaskResult>& results) {
  require_nonempty(results);
  std::int64_t successes = 0;
  for (const TaskResult& result : results) {
    if (result.outcome == Outcome::Success) ++successes;
  }
  return Ratio(successes, static_cast<std::int64_t>(results.size()));
}

Ratio mean_sub_sr(const std::vector<TaskResult>& results) {
  require_nonempty(results);
  Ratio sum;
  for (const TaskResult& result : results) sum = sum + result.sub_sr;
  return sum / Ratio(static_cast<std::int64_t>(results.size()), 1);
}

Ratio mean_step_ratio(const std::vector<TaskResult>& results) {
  require_nonempty(results);
  Ratio sum;
  for (const TaskResult& result : results) {
    sum = sum + step_ratio(result.steps_taken, result.golden_steps);
  }
  return sum / Ratio(static_cast<std::int64_t>(results.size()), 1);
}

std::map<Outcome, Ratio> failure_distribution(const std::vector<TaskResult>& results) {
  require_nonempty(results);
  std::map<Outcome, std::int64_t> counts{{Outcome::Success, 0},
                                         {Outcome::EarlyTermination, 0},
                                         {Outcome::OverdueTermination, 0},
                                         {Outcome::Failure, 0}};
  for (const TaskResult& result : results) ++counts[result.outcome];
  std::map<Outcome, Ratio> distribution;
  for (const auto& [outcome, count] : counts) {
    distribution[outcome] = Ratio(count, static_cast<std::int64_t>(results.size()));
  }
  return distribution;
}

Ratio pass_at_k(const std::vector<std::vector<bool>>& success_matrix, int k) {
  if (success_matrix.empty()) {
    throw Error(ErrorCode::EmptyResultSet, "empty success matrix");
  }
  if (k < 1) throw Error(ErrorCode::InsufficientRuns, "k must be >= 1");
  std::int64_t passed = 0;
  for (const std::vector<bool>& runs : success_matrix) {
    if (static_cast<int>(runs.size()) < k) {
      throw Error(ErrorCode::InsufficientRuns,
                  "a task has fewer than k=" + std::to_string(k) + " runs");
    }
    for (int i = 0; i < k; ++i) {
      if (runs[static_cast<std::size_t>(i)]) {
        ++passed;
        break;
      }
    }
  }
  return Ratio(passed, static_cast<std::int64_t>(success_matrix.size()));
}

AgreementReport agreement(const std::vector<Outcome>& auto_outcomes,
                          const std::vector<bool>& human_labels) {
  if (auto_outcomes.size() != human_labels.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "auto outcomes and human labels differ in length");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < auto_outcomes.size(); ++i) {
    bool auto_success = auto_outcomes[i] == Outcome::Success;
    bool human_success = human_labels[i];
    if (auto_success && human_success) ++counts.tp;
    else if (auto_success && !human_success) ++counts.fp;
    else if (!auto_success && human_success) ++counts.fn;
    else ++counts.tn;
  }
  return agreement_from_counts(counts);
}

AgreementReport agreement_from_counts(const ConfusionCounts& counts) {
  std::int64_t n = counts.total();
  if (n == 0) throw Error(ErrorCode::EmptyResultSet, "empty confusion counts");
  AgreementReport report;
  report.counts = counts;
  report.auto_sr = Ratio(counts.tp + counts.fp, n);
  report.human_sr = Ratio(counts.tp + counts.fn, n);
  report.accuracy = Ratio(counts.tp + counts.tn, n);
  return report;
}

}  // namespace trajeval
