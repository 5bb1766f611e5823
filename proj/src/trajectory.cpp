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

#include "trajeval/trajectory.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "trajeval/error.hpp"

namespace trajeval {

using nlohmann::json;

std::string_view to_string(Subset subset) {
  switch (subset) {
    case Subset::Base: return "base";
    case Subset::LongTail: return "long_tail";
    case Subset::LongHorizon: return "long_horizon";
    case Subset::GuiReasoning: return "gui_reasoning";
    case Subset::NoiseRobust: return "noise_robust";
  }
  return "";
}

std::string_view to_string(ExplorationAbility ability) {
  switch (ability) {
    case ExplorationAbility::IconUnderstanding: return "icon_understanding";
    case ExplorationAbility::HiddenFunctionDiscovery:
      return "hidden_function_discovery";
    case ExplorationAbility::HierarchicalNavigation:
      return "hierarchical_navigation";
  }
  return "";
}

std::string_view to_string(ResetCategory category) {
  switch (category) {
    case ResetCategory::TaskLevel: return "task_level";
    case ResetCategory::AppLevel: return "app_level";
    case ResetCategory::None: return "none";
    case ResetCategory::Infeasible: return "infeasible";
  }
  return "";
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::FinishedAction: return "finished_action";
    case Termination::StepLimit: return "step_limit";
  }
  return "";
}

std::optional<Subset> parse_subset(std::string_view text) {
  if (text == "base") return Subset::Base;
  if (text == "long_tail") return Subset::LongTail;
  if (text == "long_horizon") return Subset::LongHorizon;
  if (text == "gui_reasoning") return Subset::GuiReasoning;
  if (text == "noise_robust") return Subset::NoiseRobust;
  return std::nullopt;
}

std::optional<ExplorationAbility> parse_exploration_ability(std::string_view text) {
  if (text == "icon_understanding") return ExplorationAbility::IconUnderstanding;
  if (text == "hidden_function_discovery") {
    return ExplorationAbility::HiddenFunctionDiscovery;
  }
  if (text == "hierarchical_navigation") {
    return ExplorationAbility::HierarchicalNavigation;
  }
  return std::nullopt;
}

std::optional<ResetCategory> parse_reset_category(std::string_view text) {
  if (text == "task_level") return ResetCategory::TaskLevel;
  if (text == "app_level") return ResetCategory::AppLevel;
  if (text == "none") return ResetCategory::None;
  if (text == "infeasible") return ResetCategory::Infeasible;
  return std::nullopt;
}

std::optional<Termination> parse_termination(std::string_view text) {
  if (text == "finished_action") return Termination::FinishedAction;
  if (text == "step_limit") return Termination::StepLimit;
  return std::nullopt;
}

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Repeat: return "repeat";
    case NoiseKind::Unexecuted: return "unexecuted";
    case NoiseKind::Delay: return "delay";
    case NoiseKind::PopUp: return "popup";
  }
  return "";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view text) {
  if (text == "repeat") return NoiseKind::Repeat;
  if (text == "unexecuted") return NoiseKind::Unexecuted;
  if (text == "delay") return NoiseKind::Delay;
  if (text == "popup") return NoiseKind::PopUp;
  return std::nullopt;
}

int ability_weight_halves(ExplorationAbility ability) {
  switch (ability) {
    case ExplorationAbility::IconUnderstanding: return 1;
    case ExplorationAbility::HiddenFunctionDiscovery: return 2;
    case ExplorationAbility::HierarchicalNavigation: return 4;
  }
  return 0;
}

const TaskSpec* TaskCorpus::find_task(std::string_view task_id) const {
  for (const TaskSpec& task : tasks) {
    if (task.task_id == task_id) return &task;
  }
  return nullptr;
}

const TaskSpec* TaskCorpus::find_reset_task(std::string_view task_id) const {
  for (const TaskSpec& task : reset_tasks) {
    if (task.task_id == task_id) return &task;
  }
  return nullptr;
}

Step make_step(int index, std::string ui_xml, Action action) {
  Step step;
  step.index = index;
  step.tree = std::make_shared<UiTree>(parse_ui_tree(ui_xml));
  step.ui_xml = std::move(ui_xml);
  step.action = action;
  return step;
}

// --------------------------------------------------------------------------
// Task files

namespace {

[[noreturn]] void schema_error(const std::string& why) {
  throw Error(ErrorCode::SchemaError, why);
}

void require_keys(const json& object, const std::set<std::string>& required,
                  const std::set<std::string>& optional,
                  const std::string& what) {
  if (!object.is_object()) schema_error(what + " must be a JSON object");
  for (const std::string& key : required) {
    if (!object.contains(key)) {
      schema_error(what + " is missing required field \"" + key + "\"");
    }
  }
  for (const auto& [key, _] : object.items()) {
    if (!required.count(key) && !optional.count(key)) {
      schema_error(what + " has unknown field \"" + key + "\"");
    }
  }
}

std::string get_string(const json& object, const std::string& key,
                       const std::string& what) {
  if (!object.at(key).is_string()) {
    schema_error(what + " field \"" + key + "\" must be a string");
  }
  return object.at(key).get<std::string>();
}

TaskSpec parse_task_spec(const json& object, bool is_reset_entry) {
  const std::string what =
      std::string(is_reset_entry ? "reset task" : "task") + " entry";
  require_keys(object,
               {"task_id", "app_id", "instruction", "subset", "golden_steps",
                "exploration_abilities", "condition", "reset_category"},
               {"reset_task_id"}, what);
  TaskSpec spec;
  spec.task_id = get_string(object, "task_id", what);
  spec.app_id = get_string(object, "app_id", what);
  spec.instruction = get_string(object, "instruction", what);
  const std::string id_note = " (task \"" + spec.task_id + "\")";

  auto subset = parse_subset(get_string(object, "subset", what));
  if (!subset) schema_error("unknown subset" + id_note);
  spec.subset = *subset;

  if (!object.at("golden_steps").is_number_integer()) {
    schema_error("golden_steps must be an integer" + id_note);
  }
  spec.golden_steps = object.at("golden_steps").get<int>();
  if (spec.golden_steps < 1) {
    throw Error(ErrorCode::InvariantViolation,
                "golden_steps must be >= 1" + id_note);
  }

  if (!object.at("exploration_abilities").is_array()) {
    schema_error("exploration_abilities must be an array" + id_note);
  }
  for (const json& entry : object.at("exploration_abilities")) {
    if (!entry.is_string()) {
      schema_error("exploration_abilities entries must be strings" + id_note);
    }
    auto ability = parse_exploration_ability(entry.get<std::string>());
    if (!ability) schema_error("unknown exploration ability" + id_note);
    spec.exploration_abilities.push_back(*ability);
  }

  spec.condition_text = get_string(object, "condition", what);
  spec.condition = parse_condition_set(spec.condition_text);

  auto category = parse_reset_category(get_string(object, "reset_category", what));
  if (!category) schema_error("unknown reset_category" + id_note);
  spec.reset_category = *category;

  if (object.contains("reset_task_id")) {
    spec.reset_task_id = get_string(object, "reset_task_id", what);
  }
  bool needs_link = spec.reset_category == ResetCategory::TaskLevel ||
                    spec.reset_category == ResetCategory::AppLevel;
  if (needs_link && !spec.reset_task_id) {
    throw Error(ErrorCode::InvariantViolation,
                "reset_task_id required for task/app-level reset" + id_note);
  }
  if (!needs_link && spec.reset_task_id) {
    throw Error(ErrorCode::InvariantViolation,
                "reset_task_id not allowed for category \"" +
                    std::string(to_string(spec.reset_category)) + "\"" + id_note);
  }
  return spec;
}

json parse_json_text(std::string_view text, const std::string& what) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) schema_error(what + " is not valid JSON");
  return parsed;
}

}  // namespace

TaskCorpus parse_task_corpus(std::string_view json_text) {
  json document = parse_json_text(json_text, "task file");
  require_keys(document, {"tasks"}, {"reset_tasks"}, "task file");
  if (!document.at("tasks").is_array() || document.at("tasks").empty()) {
    schema_error("task file needs a non-empty \"tasks\" array");
  }
  TaskCorpus corpus;
  for (const json& entry : document.at("tasks")) {
    corpus.tasks.push_back(parse_task_spec(entry, false));
  }
  if (document.contains("reset_tasks")) {
    if (!document.at("reset_tasks").is_array()) {
      schema_error("\"reset_tasks\" must be an array");
    }
    for (const json& entry : document.at("reset_tasks")) {
      TaskSpec spec = parse_task_spec(entry, true);
      if (spec.reset_category != ResetCategory::None) {
        throw Error(ErrorCode::InvariantViolation,
                    "reset task \"" + spec.task_id +
                        "\" must have reset_category \"none\"");
      }
      corpus.reset_tasks.push_back(std::move(spec));
    }
  }

  std::set<std::string> ids;
  for (const TaskSpec& task : corpus.tasks) {
    if (!ids.insert(task.task_id).second) {
      throw Error(ErrorCode::InvariantViolation,
                  "duplicate task_id \"" + task.task_id + "\"");
    }
  }
  for (const TaskSpec& task : corpus.reset_tasks) {
    if (!ids.insert(task.task_id).second) {
      throw Error(ErrorCode::InvariantViolation,
                  "duplicate task_id \"" + task.task_id + "\"");
    }
  }
  for (const TaskSpec& task : corpus.tasks) {
    if (task.reset_task_id && !corpus.find_reset_task(*task.reset_task_id)) {
      throw Error(ErrorCode::InvariantViolation,
                  "task \"" + task.task_id + "\" links to unknown reset task \"" +
                      *task.reset_task_id + "\"");
    }
  }
  return corpus;
}

TaskCorpus load_task_file(const std::string& path) {
  return parse_task_corpus(read_text_file(path));
}

// --------------------------------------------------------------------------
// Trajectory files

Trajectory parse_trajectory_jsonl(std::string_view text) {
  Trajectory trajectory;
  bool saw_header = false;
  std::optional<Termination> termination;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    json record = parse_json_text(line, "trajectory record");
    std::string type = get_string(record, "type", "trajectory record");
    if (type == "header") {
      require_keys(record, {"type", "task_id"}, {"seed"}, "header record");
      if (saw_header) schema_error("duplicate trajectory header");
      saw_header = true;
      trajectory.task_id = get_string(record, "task_id", "header record");
      if (record.contains("seed")) {
        trajectory.seed = record.at("seed").get<std::uint64_t>();
      }
    } else if (type == "step") {
      if (termination) schema_error("step record after the footer");
      require_keys(record, {"type", "index", "ui_xml", "action"},
                   {"noise", "error", "screenshot_path"}, "step record");
      int index = record.at("index").get<int>();
      if (index != static_cast<int>(trajectory.steps.size())) {
        throw Error(ErrorCode::InvariantViolation,
                    "step index " + std::to_string(index) +
                        " out of order in trajectory");
      }
      Step step = make_step(
          index, get_string(record, "ui_xml", "step record"),
          parse_unified_action(get_string(record, "action", "step record")));
      if (record.contains("noise")) {
        const json& noise = record.at("noise");
        require_keys(noise, {"kind"}, {"page"}, "noise tag");
        auto kind = parse_noise_kind(get_string(noise, "kind", "noise tag"));
        if (!kind) schema_error("unknown noise kind");
        NoiseTag tag;
        tag.kind = *kind;
        if (noise.contains("page")) {
          tag.page_id = get_string(noise, "page", "noise tag");
        }
        step.noise = tag;
      }
      if (record.contains("error")) {
        step.error = get_string(record, "error", "step record");
      }
      trajectory.steps.push_back(std::move(step));
    } else if (type == "footer") {
      require_keys(record, {"type", "termination"}, {}, "footer record");
      termination = parse_termination(
          get_string(record, "termination", "footer record"));
      if (!termination) schema_error("unknown termination");
    } else {
      schema_error("unknown trajectory record type \"" + type + "\"");
    }
  }
  if (!saw_header) schema_error("trajectory has no header record");
  if (!termination) schema_error("trajectory has no footer record");
  trajectory.termination = *termination;
  if (trajectory.termination == Termination::FinishedAction &&
      (trajectory.steps.empty() ||
       trajectory.steps.back().action.kind != ActionKind::Finished)) {
    throw Error(ErrorCode::InvariantViolation,
                "termination finished_action requires a final finished step");
  }
  return trajectory;
}

std::string trajectory_to_jsonl(const Trajectory& trajectory) {
  std::string out;
  json header{{"type", "header"}, {"task_id", trajectory.task_id}};
  if (trajectory.seed) header["seed"] = *trajectory.seed;
  out += header.dump();
  out.push_back('\n');
  for (const Step& step : trajectory.steps) {
    json record{{"type", "step"},
                {"index", step.index},
                {"ui_xml", step.ui_xml},
                {"action", format_unified_action(step.action)}};
    if (step.noise) {
      json noise{{"kind", std::string(to_string(step.noise->kind))}};
      if (step.noise->page_id) noise["page"] = *step.noise->page_id;
      record["noise"] = noise;
    }
    if (step.error) record["error"] = *step.error;
    out += record.dump();
    out.push_back('\n');
  }
  json footer{{"type", "footer"},
              {"termination", std::string(to_string(trajectory.termination))}};
  out += footer.dump();
  out.push_back('\n');
  return out;
}

Trajectory load_trajectory_file(const std::string& path) {
  Trajectory trajectory = parse_trajectory_jsonl(read_text_file(path));
  return trajectory;
}

void save_trajectory(const Trajectory& trajectory, const std::string& path) {
  write_text_file(path, trajectory_to_jsonl(trajectory));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
}

}  // namespace trajeval
