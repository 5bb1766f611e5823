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

#include "trajeval/agents.hpp"

#include <json.hpp>

#include "trajeval/error.hpp"
#include "trajeval/rng.hpp"

namespace trajeval {

using nlohmann::json;

namespace {

std::string wrap_turn(const std::string& thought, const std::string& action) {
  return "Thought: " + thought + "\nAction: " + action;
}

class GoldenReplayer : public AgentAdapter {
 public:
  explicit GoldenReplayer(std::vector<std::string> actions)
      : actions_(std::move(actions)) {}

  std::string decide(const AgentContext& context) override {
    std::size_t step = context.history.size();
    if (step >= actions_.size()) {
      return wrap_turn("replay exhausted", "wait()");
    }
    return wrap_turn("replay step " + std::to_string(step), actions_[step]);
  }

 private:
  std::vector<std::string> actions_;
};

class EarlyStopper : public AgentAdapter {
 public:
  explicit EarlyStopper(int steps) : steps_(steps) {}

  std::string decide(const AgentContext& context) override {
    if (static_cast<int>(context.history.size()) < steps_) {
      return wrap_turn("stalling", "wait()");
    }
    return wrap_turn("assuming done", "finished(content='done')");
  }

 private:
  int steps_;
};

class Looper : public AgentAdapter {
 public:
  explicit Looper(std::string action_text) : action_(std::move(action_text)) {}

  std::string decide(const AgentContext&) override {
    return wrap_turn("looping", action_);
  }

 private:
  std::string action_;
};

}  // namespace

std::unique_ptr<AgentAdapter> make_golden_replayer(std::vector<std::string> actions) {
  return std::make_unique<GoldenReplayer>(std::move(actions));
}

std::unique_ptr<AgentAdapter> make_early_stopper(int steps_before_finish) {
  return std::make_unique<EarlyStopper>(steps_before_finish);
}

std::unique_ptr<AgentAdapter> make_looper(std::string action_text) {
  return std::make_unique<Looper>(std::move(action_text));
}

std::unique_ptr<AgentAdapter> make_popup_blind_looper() {
  return std::make_unique<Looper>("press_back()");
}

GoldenActions parse_golden_actions(std::string_view json_text) {
  json document = json::parse(json_text, nullptr, false);
  if (document.is_discarded() || !document.is_object()) {
    throw Error(ErrorCode::SchemaError, "golden action file must be a JSON object");
  }
  GoldenActions golden;
  for (const auto& [task_id, actions] : document.items()) {
    if (!actions.is_array() || actions.empty()) {
      throw Error(ErrorCode::SchemaError,
                  "golden actions for \"" + task_id + "\" must be a non-empty array");
    }
    std::vector<std::string> list;
    for (const json& entry : actions) {
      if (!entry.is_string()) {
        throw Error(ErrorCode::SchemaError,
                    "golden action entries must be strings (task \"" + task_id + "\")");
      }
      std::string text = entry.get<std::string>();
      parse_unified_action(text);  // validate eagerly
      list.push_back(std::move(text));
    }
    golden[task_id] = std::move(list);
  }
  return golden;
}

GoldenActions load_golden_actions(const std::string& path) {
  return parse_golden_actions(read_text_file(path));
}

AgentSpec parse_agent_spec(const std::string& text) {
  AgentSpec spec;
  std::string kind = text;
  std::string param;
  if (std::size_t colon = text.find(':'); colon != std::string::npos) {
    kind = text.substr(0, colon);
    param = text.substr(colon + 1);
  }
  spec.kind = kind;
  if (kind == "golden" || kind == "popup_blind") {
    if (!param.empty()) {
      throw Error(ErrorCode::ConfigError, "agent " + kind + " takes no parameter");
    }
  } else if (kind == "early") {
    if (!param.empty()) spec.early_steps = std::atoi(param.c_str());
    if (spec.early_steps < 0) {
      throw Error(ErrorCode::ConfigError, "early stop count must be >= 0");
    }
  } else if (kind == "looper") {
    if (!param.empty()) spec.loop_action = param;
    parse_unified_action(spec.loop_action);
  } else if (kind == "bernoulli") {
    if (!param.empty()) spec.bernoulli_p = std::atof(param.c_str());
    if (spec.bernoulli_p < 0 || spec.bernoulli_p > 1) {
      throw Error(ErrorCode::ConfigError, "bernoulli p must be in [0, 1]");
    }
  } else {
    throw Error(ErrorCode::ConfigError, "unknown agent \"" + text + "\"");
  }
  return spec;
}

std::unique_ptr<AgentAdapter> make_agent(const AgentSpec& spec,
                                         const TaskSpec& task,
                                         const GoldenActions& golden,
                                         std::uint64_t attempt_seed) {
  auto golden_list = [&]() -> const std::vector<std::string>& {
    auto it = golden.find(task.task_id);
    if (it == golden.end()) {
      throw Error(ErrorCode::ConfigError,
                  "no golden actions for task \"" + task.task_id + "\"");
    }
    return it->second;
  };
  if (spec.kind == "golden") return make_golden_replayer(golden_list());
  if (spec.kind == "early") return make_early_stopper(spec.early_steps);
  if (spec.kind == "looper") return make_looper(spec.loop_action);
  if (spec.kind == "popup_blind") return make_popup_blind_looper();
  if (spec.kind == "bernoulli") {
    DetRng rng(derive_seed(attempt_seed, 0xbe2201));
    bool success = rng.next_unit() < spec.bernoulli_p;
    if (success) return make_golden_replayer(golden_list());
    return make_early_stopper(0);
  }
  throw Error(ErrorCode::ConfigError, "unknown agent kind \"" + spec.kind + "\"");
}

}  // namespace trajeval
