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
#include <memory>
#include <string>
#include <vector>

#include "trajeval/action.hpp"
#include "trajeval/trajectory.hpp"

namespace trajeval {

struct HistoryEntry {
  std::string observation_digest;
  std::string action_text;  // unified form
};

struct AgentContext {
  const std::string& observation_xml;
  const std::string& instruction;
  const std::vector<HistoryEntry>& history;
};

/// Black box that turns (observation, instruction, history) into one raw
/// model turn; the harness never looks inside. The returned text is fed to
/// the adapter's translator dialect.
class AgentAdapter {
 public:
  virtual ~AgentAdapter() = default;
  virtual std::string decide(const AgentContext& context) = 0;
  virtual TranslatorId translator_id() const { return "thought_action"; }
};

// Scripted test doubles. All emit the reference "Thought: ...\nAction: ..."
// dialect so every run exercises the translator path. Policies are pure
// functions of (observation, step count), with the step count taken from
// the history length.

/// Replays a fixed unified-action list; wait() past the end.
std::unique_ptr<AgentAdapter> make_golden_replayer(std::vector<std::string> actions);

/// k filler wait() steps, then finished.
std::unique_ptr<AgentAdapter> make_early_stopper(int steps_before_finish);

/// The same action forever; never finishes.
std::unique_ptr<AgentAdapter> make_looper(std::string action_text);

/// Presses back forever: never clicks a popup close element and never
/// finishes, so a forced popup deadlocks it to the step cap.
std::unique_ptr<AgentAdapter> make_popup_blind_looper();

// --------------------------------------------------------------------------
// Golden action lists (corpus side file keyed by task_id).

using GoldenActions = std::map<std::string, std::vector<std::string>>;

GoldenActions load_golden_actions(const std::string& path);
GoldenActions parse_golden_actions(std::string_view json_text);

/// Agent selector parsed from --agent. Forms: "golden", "early[:k]",
/// "looper[:action]", "popup_blind", "bernoulli[:p]".
struct AgentSpec {
  std::string kind = "golden";
  int early_steps = 0;
  std::string loop_action = "press_back()";
  double bernoulli_p = 0.6;
};

AgentSpec parse_agent_spec(const std::string& text);

/// Builds the adapter for one task attempt. The bernoulli agent flips a
/// seeded coin per attempt: heads replays the golden list, tails finishes
/// immediately. Throws Error{ConfigError} when a golden list is needed but
/// missing.
std::unique_ptr<AgentAdapter> make_agent(const AgentSpec& spec,
                                         const TaskSpec& task,
                                         const GoldenActions& golden,
                                         std::uint64_t attempt_seed);

}  // namespace trajeval
