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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajeval/action.hpp"
#include "trajeval/condlang.hpp"
#include "trajeval/noise_types.hpp"
#include "trajeval/uitree.hpp"

namespace trajeval {

enum class Subset { Base, LongTail, LongHorizon, GuiReasoning, NoiseRobust };

enum class ExplorationAbility {
  IconUnderstanding,       // weight 0.5
  HiddenFunctionDiscovery, // weight 1
  HierarchicalNavigation,  // weight 2
};

enum class ResetCategory { TaskLevel, AppLevel, None, Infeasible };

enum class Termination { FinishedAction, StepLimit };

std::string_view to_string(Subset subset);
std::string_view to_string(ExplorationAbility ability);
std::string_view to_string(ResetCategory category);
std::string_view to_string(Termination termination);
std::optional<Subset> parse_subset(std::string_view text);
std::optional<ExplorationAbility> parse_exploration_ability(std::string_view text);
std::optional<ResetCategory> parse_reset_category(std::string_view text);
std::optional<Termination> parse_termination(std::string_view text);

/// Ability weight in half units (icon=1, hidden=2, hierarchical=4), so
/// difficulty sums stay integral.
int ability_weight_halves(ExplorationAbility ability);

struct TaskSpec {
  std::string task_id;
  std::string app_id;
  std::string instruction;
  Subset subset = Subset::Base;
  int golden_steps = 1;
  // Multiset: repeated entries count, e.g. a weight-4 task lists
  // HiddenFunctionDiscovery twice.
  std::vector<ExplorationAbility> exploration_abilities;
  std::string condition_text;
  ConditionSet condition;
  ResetCategory reset_category = ResetCategory::None;
  std::optional<std::string> reset_task_id;
};

/// One benchmark task file: a "tasks" array plus a "reset_tasks" array of
/// the inverse task specs that reset_task_id values point into.
struct TaskCorpus {
  std::vector<TaskSpec> tasks;
  std::vector<TaskSpec> reset_tasks;

  const TaskSpec* find_task(std::string_view task_id) const;
  const TaskSpec* find_reset_task(std::string_view task_id) const;
};

struct Step {
  int index = 0;
  std::string ui_xml;
  Action action;
  std::optional<NoiseTag> noise;
  std::optional<std::string> error;  // e.g. untranslatable agent output
  std::shared_ptr<const UiTree> tree;
};

struct Trajectory {
  std::string task_id;
  std::vector<Step> steps;
  Termination termination = Termination::StepLimit;
  std::optional<std::uint64_t> seed;  // noise rng seed used, if any
};

/// Parses one action turn in the unified grammar and attaches the parsed
/// UI tree to each step.
Step make_step(int index, std::string ui_xml, Action action);

// --------------------------------------------------------------------------
// File formats (UTF-8 JSON / JSON-Lines; schemas under schemas/).

/// Loads and validates a task file: required fields exactly, unique ids,
/// parseable conditions, reset linkage (task/app-level tasks name an
/// existing reset task; none/infeasible carry no link).
/// Throws Error{IoError | SchemaError | InvariantViolation}; condition
/// parse errors propagate.
TaskCorpus load_task_file(const std::string& path);
TaskCorpus parse_task_corpus(std::string_view json_text);

/// JSON-Lines: a header record {type, task_id, seed?}, one step record
/// {type, index, ui_xml, action, noise?, error?} per step, and a footer
/// record {type, termination} written last.
Trajectory load_trajectory_file(const std::string& path);
Trajectory parse_trajectory_jsonl(std::string_view text);
void save_trajectory(const Trajectory& trajectory, const std::string& path);
std::string trajectory_to_jsonl(const Trajectory& trajectory);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace trajeval
