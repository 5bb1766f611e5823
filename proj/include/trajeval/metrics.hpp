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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajeval/evalengine.hpp"
#include "trajeval/noise_types.hpp"
#include "trajeval/rational.hpp"
#include "trajeval/trajectory.hpp"

namespace trajeval {

enum class Difficulty { Easy, Medium, Hard };

std::string_view to_string(Difficulty difficulty);

/// Golden-step bands: Easy < 8, Medium 8-19, Hard >= 20.
Difficulty difficulty_by_steps(int golden_steps);

/// Exploration-weight bands over summed ability weights (0.5 / 1 / 2 per
/// occurrence): Easy <= 1, Medium (1, 2], Hard > 2.
Difficulty difficulty_by_weight(const std::vector<ExplorationAbility>& abilities);

/// The label used for bucketing: weight-based for gui_reasoning tasks,
/// step-based for the other four subsets.
Difficulty task_difficulty(const TaskSpec& task);

/// One evaluated task attempt.
struct TaskResult {
  std::string task_id;
  int epoch = 0;
  int run = 0;
  Outcome outcome = Outcome::Failure;
  Ratio sub_sr;
  int matched_clauses = 0;
  int clause_count = 0;
  std::vector<std::optional<int>> clause_hits;
  int steps_taken = 0;
  int golden_steps = 1;
  Subset subset = Subset::Base;
  Difficulty difficulty = Difficulty::Easy;
  std::map<NoiseKind, int> noise_types_fired;  // multiset as kind -> count
  std::string trajectory_path;                 // relative to the run dir
};

Ratio step_ratio(int steps_taken, int golden_steps);

/// |Success| / N. Throws Error{EmptyResultSet} on an empty input.
Ratio success_rate(const std::vector<TaskResult>& results);
Ratio mean_sub_sr(const std::vector<TaskResult>& results);
Ratio mean_step_ratio(const std::vector<TaskResult>& results);

/// Fractions over all four outcomes; exact, so they sum to 1.
std::map<Outcome, Ratio> failure_distribution(const std::vector<TaskResult>& results);

/// success_matrix[task][run]; fraction of tasks with >= 1 success among the
/// first k runs. Throws Error{InsufficientRuns} when any task has < k runs.
Ratio pass_at_k(const std::vector<std::vector<bool>>& success_matrix, int k);

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
};

struct AgreementReport {
  ConfusionCounts counts;
  Ratio auto_sr;
  Ratio human_sr;
  Ratio accuracy;
};

/// Auto outcome (Success = positive) vs a human success label per task.
/// Throws Error{LengthMismatch} when the sequences disagree in length.
AgreementReport agreement(const std::vector<Outcome>& auto_outcomes,
                          const std::vector<bool>& human_labels);

AgreementReport agreement_from_counts(const ConfusionCounts& counts);

}  // namespace trajeval
