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

#include "trajeval/harness.hpp"

#include <chrono>
#include <filesystem>
#include <future>
#include <thread>

#include "trajeval/error.hpp"
#include "trajeval/rng.hpp"

namespace trajeval {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (!(Ratio(0, 1) < step_multiplier)) {
    throw Error(ErrorCode::ConfigError, "step_multiplier must be positive");
  }
  if (wait_ms < 0) throw Error(ErrorCode::ConfigError, "wait_ms must be >= 0");
  if (epochs < 1) throw Error(ErrorCode::ConfigError, "epochs must be >= 1");
  if (runs_per_task < 1) {
    throw Error(ErrorCode::ConfigError, "runs_per_task must be >= 1");
  }
  if (workers < 1) throw Error(ErrorCode::ConfigError, "workers must be >= 1");
  noise.validate();
}

namespace {

bool noise_applies(const TaskSpec& task, const RunConfig& config) {
  return task.subset == Subset::NoiseRobust &&
         Ratio(0, 1) < config.noise.probability;
}

std::uint64_t attempt_seed(const RunConfig& config, const TaskSpec& task,
                           int epoch, int run) {
  std::uint64_t salt = fnv1a64(task.task_id);
  salt = derive_seed(salt, static_cast<std::uint64_t>(epoch) * 1000003u +
                               static_cast<std::uint64_t>(run));
  return derive_seed(config.seed, salt);
}

json config_echo_json(const RunConfig& config) {
  json noise_types = json::array();
  for (NoiseKind kind : config.noise.enabled_types) {
    noise_types.push_back(std::string(to_string(kind)));
  }
  json noise{{"probability", ratio_json(config.noise.probability)},
             {"types", noise_types}};
  if (!config.noise.type_weights.empty()) {
    noise["weights"] = config.noise.type_weights;
  }
  std::string agent = config.agent.kind;
  if (config.agent.kind == "early") {
    agent += ":" + std::to_string(config.agent.early_steps);
  } else if (config.agent.kind == "looper") {
    agent += ":" + config.agent.loop_action;
  } else if (config.agent.kind == "bernoulli") {
    agent += ":" + std::to_string(config.agent.bernoulli_p);
  }
  return json{{"agent", agent},
              {"epochs", config.epochs},
              {"noise", noise},
              {"runs_per_task", config.runs_per_task},
              {"seed", config.seed},
              {"step_multiplier", ratio_json(config.step_multiplier)},
              {"wait_ms", config.wait_ms},
              {"workers", config.workers}};
}

struct ManifestTrajectory {
  std::string task_id;
  int epoch = 0;
  int run = 0;
  std::string path;
};

struct ManifestReset {
  std::string reset_task_id;
  int epoch = 0;
  std::string path;
};

std::string sanitize_for_filename(std::string_view task_id) {
  std::string out;
  for (char c : task_id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
              c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

}  // namespace

TaskResult evaluate_trajectory(const Trajectory& trajectory, const TaskSpec& task,
                               int epoch, int run, const std::string& path) {
  MatchReport match = match_trajectory(trajectory, task.condition);
  TaskResult result;
  result.task_id = task.task_id;
  result.epoch = epoch;
  result.run = run;
  result.outcome = classify_outcome(trajectory, match);
  result.sub_sr = sub_sr(match);
  result.matched_clauses = match.matched_count;
  result.clause_count = static_cast<int>(match.clause_hits.size());
  result.clause_hits = match.clause_hits;
  result.steps_taken = static_cast<int>(trajectory.steps.size());
  result.golden_steps = task.golden_steps;
  result.subset = task.subset;
  result.difficulty = task_difficulty(task);
  for (const Step& step : trajectory.steps) {
    if (step.noise) ++result.noise_types_fired[step.noise->kind];
  }
  result.trajectory_path = path;
  return result;
}

TaskAttempt run_task(const TaskSpec& task, AgentAdapter& agent, DeviceEnv& env,
                     const RunConfig& config, std::uint64_t noise_seed,
                     int epoch, int run) {
  const std::int64_t limit = config.step_limit(task.golden_steps);
  const bool with_noise = noise_applies(task, config);
  NoiseConfig noise_config = config.noise;
  noise_config.seed = noise_seed;
  NoiseInjector injector(noise_config);

  Trajectory trajectory;
  trajectory.task_id = task.task_id;
  if (with_noise) trajectory.seed = noise_seed;
  trajectory.termination = Termination::StepLimit;

  std::vector<HistoryEntry> history;
  for (int index = 0; static_cast<std::int64_t>(index) < limit; ++index) {
    std::string observation = injector.has_unresolved()
                                  ? injector.unresolved_event()->masked_xml
                                  : env.observe();
    std::string raw;
    try {
      raw = agent.decide(AgentContext{observation, task.instruction, history});
    } catch (const std::exception&) {
      // Adapter died; keep what exists and let the evaluator judge it.
      trajectory.termination = Termination::StepLimit;
      break;
    }

    Action action;
    std::optional<std::string> error_tag;
    try {
      action = translate_agent_output(raw, agent.translator_id());
    } catch (const Error& error) {
      // A malformed turn burns the step, as a device that received nothing.
      action = Action{ActionKind::Wait, std::nullopt, std::nullopt, std::nullopt};
      error_tag = std::string(to_string(error.code()));
    }

    Step step = make_step(index, observation, action);
    step.error = error_tag;

    if (action.kind == ActionKind::Finished) {
      trajectory.steps.push_back(std::move(step));
      trajectory.termination = Termination::FinishedAction;
      break;
    }

    if (injector.has_unresolved()) {
      injector.resolve_noise(action, env);
    } else {
      std::optional<NoiseKind> fired =
          with_noise ? injector.sample_noise() : std::nullopt;
      if (fired) {
        injector.apply_noise(*fired, action, env, index);
        NoiseTag tag;
        tag.kind = *fired;
        if (injector.has_unresolved()) {
          tag.page_id = injector.unresolved_event()->template_page_id;
        }
        step.noise = tag;
      } else {
        env.execute(action);
      }
    }
    if (config.wait_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(config.wait_ms));
    }

    history.push_back(HistoryEntry{hex64(fnv1a64(step.ui_xml)),
                                   format_unified_action(action)});
    trajectory.steps.push_back(std::move(step));
  }

  TaskAttempt attempt;
  attempt.result = evaluate_trajectory(trajectory, task, epoch, run, "");
  attempt.trajectory = std::move(trajectory);
  return attempt;
}

TaskAttempt run_scripted(AgentAdapter& agent, DeviceEnv& env, const TaskSpec& task,
                         const RunConfig& config, std::uint64_t noise_seed) {
  return run_task(task, agent, env, config, noise_seed);
}

std::map<std::string, bool> load_human_labels(const std::string& path) {
  json document = json::parse(read_text_file(path), nullptr, false);
  if (document.is_discarded() || !document.is_object()) {
    throw Error(ErrorCode::SchemaError, "human label file must be a JSON object");
  }
  std::map<std::string, bool> labels;
  for (const auto& [task_id, value] : document.items()) {
    if (!value.is_boolean()) {
      throw Error(ErrorCode::SchemaError, "human labels must be booleans");
    }
    labels[task_id] = value.get<bool>();
  }
  return labels;
}

namespace {

std::optional<AgreementReport> build_agreement(
    const std::vector<TaskResult>& results, const TaskCorpus& corpus,
    const std::optional<std::map<std::string, bool>>& human_labels) {
  if (!human_labels) return std::nullopt;
  // First attempt (epoch 0, run 0) per task, in corpus order; only labeled
  // tasks enter the comparison.
  std::vector<Outcome> auto_outcomes;
  std::vector<bool> labels;
  for (const TaskSpec& task : corpus.tasks) {
    auto label = human_labels->find(task.task_id);
    if (label == human_labels->end()) continue;
    for (const TaskResult& result : results) {
      if (result.task_id == task.task_id && result.epoch == 0 && result.run == 0) {
        auto_outcomes.push_back(result.outcome);
        labels.push_back(label->second);
        break;
      }
    }
  }
  if (auto_outcomes.empty()) return std::nullopt;
  return agreement(auto_outcomes, labels);
}

struct AttemptPlanEntry {
  const TaskSpec* task = nullptr;
  int epoch = 0;
  int run = 0;
  std::size_t slot = 0;  // destination index in results
};

}  // namespace

RunReport run_benchmark(const TaskCorpus& corpus, const std::vector<MockApp>& apps,
                        const GoldenActions& golden, const RunConfig& config,
                        const std::optional<std::map<std::string, bool>>&
                            human_labels) {
  config.validate();
  if (corpus.tasks.empty()) {
    throw Error(ErrorCode::EmptyResultSet, "no tasks to run");
  }
  EpochPlan plan = plan_epoch(corpus);

  std::map<std::string, const MockApp*> app_index;
  for (const MockApp& app : apps) app_index[app.app_id] = &app;
  auto app_for = [&](const TaskSpec& task) -> const MockApp& {
    auto it = app_index.find(task.app_id);
    if (it == app_index.end()) {
      throw Error(ErrorCode::ConfigError,
                  "task \"" + task.task_id + "\" references unknown app \"" +
                      task.app_id + "\"");
    }
    return *it->second;
  };
  for (const TaskSpec& task : corpus.tasks) app_for(task);
  for (const ResetJob& job : plan.jobs) app_for(*job.reset_spec);

  // One env per app; flags persist across tasks within an epoch. Baselines
  // are the fresh-env digests the reset mechanism must restore.
  std::map<std::string, DeviceEnv> envs;
  std::map<std::string, std::uint64_t> baselines;
  for (const MockApp& app : apps) {
    envs.emplace(app.app_id, DeviceEnv(app));
    baselines[app.app_id] = envs.at(app.app_id).digest();
  }

  const bool writing = !config.output_dir.empty();
  fs::path out_dir(config.output_dir);
  if (writing) {
    fs::create_directories(out_dir / "trajectories");
    fs::create_directories(out_dir / "resets");
  }

  std::vector<TaskResult> results;
  std::vector<ManifestTrajectory> manifest_trajectories;
  std::vector<ManifestReset> manifest_resets;
  ResetReport merged_reset;
  std::int64_t reset_matched = 0;
  std::int64_t reset_total = 0;

  // Agents that replay golden lists need them for every task; catch that
  // before the batch starts rather than mid-run.
  if (config.agent.kind == "golden" || config.agent.kind == "bernoulli") {
    for (const TaskSpec& task : corpus.tasks) {
      if (!golden.count(task.task_id)) {
        throw Error(ErrorCode::ConfigError,
                    "no golden actions for task \"" + task.task_id + "\"");
      }
    }
  }
  for (const ResetJob& job : plan.jobs) {
    if (!golden.count(job.reset_task_id)) {
      throw Error(ErrorCode::ConfigError,
                  "no golden actions for reset task \"" + job.reset_task_id + "\"");
    }
  }

  // Attempts for one app are strictly ordered; distinct apps share nothing
  // (envs, noise streams, files are all per-app or per-attempt), so app
  // groups can run on parallel workers without changing any outcome.
  // A task whose attempt blows up is quarantined as a zero-step Failure so
  // the rest of the batch is unaffected.
  auto run_attempt = [&](const TaskSpec& task, int epoch, int run) -> TaskAttempt {
    DeviceEnv& env = envs.at(task.app_id);
    env.position_home();
    std::uint64_t seed = attempt_seed(config, task, epoch, run);
    try {
      std::unique_ptr<AgentAdapter> agent =
          make_agent(config.agent, task, golden, seed);
      return run_task(task, *agent, env, config, derive_seed(seed, 0x7015e),
                      epoch, run);
    } catch (const std::exception&) {
      TaskAttempt failed;
      failed.trajectory.task_id = task.task_id;
      failed.trajectory.termination = Termination::StepLimit;
      failed.result = evaluate_trajectory(failed.trajectory, task, epoch, run, "");
      return failed;
    }
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Benchmark pass: all runs, task order inside each run.
    std::vector<AttemptPlanEntry> entries;
    for (int run = 0; run < config.runs_per_task; ++run) {
      for (const TaskSpec& task : corpus.tasks) {
        entries.push_back(AttemptPlanEntry{&task, epoch, run, entries.size()});
      }
    }
    std::vector<TaskAttempt> attempts(entries.size());

    if (config.workers > 1) {
      // Group by app; each group keeps its global order.
      std::map<std::string, std::vector<std::size_t>> groups;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        groups[entries[i].task->app_id].push_back(i);
      }
      std::vector<std::future<void>> futures;
      for (auto& [app_id, indices] : groups) {
        futures.push_back(std::async(std::launch::async, [&, indices]() {
          for (std::size_t i : indices) {
            const AttemptPlanEntry& entry = entries[i];
            attempts[entry.slot] = run_attempt(*entry.task, entry.epoch, entry.run);
          }
        }));
      }
      for (auto& future : futures) future.get();
    } else {
      for (const AttemptPlanEntry& entry : entries) {
        attempts[entry.slot] = run_attempt(*entry.task, entry.epoch, entry.run);
      }
    }

    for (std::size_t i = 0; i < entries.size(); ++i) {
      const AttemptPlanEntry& entry = entries[i];
      TaskAttempt& attempt = attempts[i];
      std::string relpath;
      if (writing) {
        relpath = "trajectories/" + sanitize_for_filename(entry.task->task_id) +
                  "__e" + std::to_string(entry.epoch) + "_r" +
                  std::to_string(entry.run) + ".jsonl";
        save_trajectory(attempt.trajectory, (out_dir / relpath).string());
      }
      attempt.result.trajectory_path = relpath;
      manifest_trajectories.push_back(ManifestTrajectory{
          entry.task->task_id, entry.epoch, entry.run, relpath});
      results.push_back(attempt.result);
    }

    // Reset pass: the reset plan runs with a reliable golden-replay agent,
    // whatever agent was under test.
    ResetReport epoch_reset = execute_resets(plan, [&](const TaskSpec& reset_task) {
      DeviceEnv& env = envs.at(reset_task.app_id);
      env.position_home();
      auto agent = make_golden_replayer([&] {
        auto it = golden.find(reset_task.task_id);
        if (it == golden.end()) {
          throw Error(ErrorCode::ConfigError,
                      "no golden actions for reset task \"" +
                          reset_task.task_id + "\"");
        }
        return it->second;
      }());
      TaskAttempt attempt =
          run_task(reset_task, *agent, env, config, 0, epoch, 0);
      if (writing) {
        std::string relpath = "resets/" +
                              sanitize_for_filename(reset_task.task_id) + "__e" +
                              std::to_string(epoch) + ".jsonl";
        save_trajectory(attempt.trajectory, (out_dir / relpath).string());
        manifest_resets.push_back(
            ManifestReset{reset_task.task_id, epoch, relpath});
      } else {
        manifest_resets.push_back(ManifestReset{reset_task.task_id, epoch, ""});
      }
      return ResetRunOutcome{attempt.result.outcome,
                             attempt.result.matched_clauses ==
                                 attempt.result.clause_count};
    });
    for (const ResetJobResult& job : epoch_reset.jobs) {
      merged_reset.jobs.push_back(job);
      if (job.all_matched) ++reset_matched;
      ++reset_total;
    }
  }

  // Post-reset restoration check against the pre-run baselines.
  for (auto& [app_id, env] : envs) {
    env.position_home();
    merged_reset.restored[app_id] = verify_restoration(env, baselines.at(app_id));
  }
  merged_reset.reset_sr =
      reset_total == 0 ? Ratio(1, 1) : Ratio(reset_matched, reset_total);

  RunReport report;
  report.config_echo = config_echo_json(config);
  report.seed = config.seed;
  report.task_results = std::move(results);
  report.reset = std::move(merged_reset);
  report.agreement = build_agreement(report.task_results, corpus, human_labels);

  if (writing) {
    json manifest;
    manifest["config"] = report.config_echo;
    manifest["seed"] = config.seed;
    json trajectories = json::array();
    for (const ManifestTrajectory& entry : manifest_trajectories) {
      trajectories.push_back(json{{"task_id", entry.task_id},
                                  {"epoch", entry.epoch},
                                  {"run", entry.run},
                                  {"path", entry.path}});
    }
    manifest["trajectories"] = trajectories;
    json resets = json::array();
    for (const ManifestReset& entry : manifest_resets) {
      resets.push_back(json{{"reset_task_id", entry.reset_task_id},
                            {"epoch", entry.epoch},
                            {"path", entry.path}});
    }
    manifest["reset_trajectories"] = resets;
    json restored = json::object();
    for (const auto& [app_id, ok] : report.reset.restored) restored[app_id] = ok;
    manifest["restored"] = restored;
    write_text_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
    write_text_file((out_dir / "report.json").string(),
                    report_to_json(report).dump(2) + "\n");
    write_text_file((out_dir / "summary.csv").string(), report_summary_csv(report));
  }
  return report;
}

RunReport reevaluate(const std::string& run_dir, const TaskCorpus& corpus,
                     const std::optional<std::map<std::string, bool>>&
                         human_labels) {
  fs::path dir(run_dir);
  json manifest = json::parse(read_text_file((dir / "manifest.json").string()),
                              nullptr, false);
  if (manifest.is_discarded()) {
    throw Error(ErrorCode::SchemaError, "manifest.json is not valid JSON");
  }

  RunReport report;
  report.config_echo = manifest.at("config");
  report.seed = manifest.at("seed").get<std::uint64_t>();

  for (const json& entry : manifest.at("trajectories")) {
    std::string task_id = entry.at("task_id").get<std::string>();
    const TaskSpec* task = corpus.find_task(task_id);
    if (!task) {
      throw Error(ErrorCode::UnknownTaskId,
                  "trajectory references unknown task \"" + task_id + "\"");
    }
    std::string relpath = entry.at("path").get<std::string>();
    Trajectory trajectory = load_trajectory_file((dir / relpath).string());
    if (trajectory.task_id != task_id) {
      throw Error(ErrorCode::InvariantViolation,
                  "trajectory header task_id does not match the manifest");
    }
    report.task_results.push_back(
        evaluate_trajectory(trajectory, *task, entry.at("epoch").get<int>(),
                            entry.at("run").get<int>(), relpath));
  }

  EpochPlan plan = plan_epoch(corpus);
  std::int64_t reset_matched = 0;
  std::int64_t reset_total = 0;
  for (const json& entry : manifest.at("reset_trajectories")) {
    std::string reset_id = entry.at("reset_task_id").get<std::string>();
    const TaskSpec* reset_task = corpus.find_reset_task(reset_id);
    if (!reset_task) {
      throw Error(ErrorCode::UnknownTaskId,
                  "reset trajectory references unknown task \"" + reset_id + "\"");
    }
    const ResetJob* job = nullptr;
    for (const ResetJob& candidate : plan.jobs) {
      if (candidate.reset_task_id == reset_id) job = &candidate;
    }
    if (!job) {
      throw Error(ErrorCode::DanglingResetRef,
                  "reset trajectory for unplanned job \"" + reset_id + "\"");
    }
    Trajectory trajectory =
        load_trajectory_file((dir / entry.at("path").get<std::string>()).string());
    MatchReport match = match_trajectory(trajectory, reset_task->condition);
    ResetJobResult result;
    result.reset_task_id = reset_id;
    result.category = job->category;
    result.serves = job->serves;
    result.outcome = classify_outcome(trajectory, match);
    result.all_matched = match.all_matched;
    if (result.all_matched) ++reset_matched;
    ++reset_total;
    report.reset.jobs.push_back(std::move(result));
  }
  report.reset.reset_sr =
      reset_total == 0 ? Ratio(1, 1) : Ratio(reset_matched, reset_total);
  if (manifest.contains("restored")) {
    for (const auto& [app_id, ok] : manifest.at("restored").items()) {
      report.reset.restored[app_id] = ok.get<bool>();
    }
  }

  report.agreement = build_agreement(report.task_results, corpus, human_labels);
  return report;
}

}  // namespace trajeval
