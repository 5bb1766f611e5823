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

#include "trajeval/cli.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajeval/error.hpp"
#include "trajeval/harness.hpp"

namespace trajeval {

namespace {

using nlohmann::json;

struct CommonOptions {
  std::string tasks_path;
  std::string apps_path;
  std::string golden_path;
  std::string out_dir;
  std::string human_labels_path;
  std::string agent = "golden";
  std::string noise_types = "repeat,unexecuted,delay,popup";
  std::string noise_prob = "0.2";
  std::string step_multiplier = "3";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int runs = 1;
  int epochs = 1;
  int workers = 1;
  int wait_ms = 0;
};

std::vector<NoiseKind> parse_noise_types(const std::string& csv) {
  std::vector<NoiseKind> kinds;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string token = csv.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) {
      auto kind = parse_noise_kind(token);
      if (!kind) {
        throw Error(ErrorCode::ConfigError, "unknown noise type \"" + token + "\"");
      }
      kinds.push_back(*kind);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (kinds.empty()) {
    throw Error(ErrorCode::ConfigError, "--noise-types must name at least one type");
  }
  return kinds;
}

std::uint64_t resolve_seed(const CommonOptions& options) {
  if (options.seed_given) return options.seed;
  if (const char* env = std::getenv("TRAJEVAL_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

RunConfig build_config(const CommonOptions& options) {
  RunConfig config;
  config.step_multiplier = Ratio::from_decimal(options.step_multiplier);
  config.wait_ms = options.wait_ms;
  config.noise.probability = Ratio::from_decimal(options.noise_prob);
  config.noise.enabled_types = parse_noise_types(options.noise_types);
  config.epochs = options.epochs;
  config.runs_per_task = options.runs;
  config.workers = options.workers;
  config.output_dir = options.out_dir;
  config.agent = parse_agent_spec(options.agent);
  config.seed = resolve_seed(options);
  config.noise.seed = config.seed;
  config.validate();
  return config;
}

std::optional<std::map<std::string, bool>> maybe_labels(const CommonOptions& options) {
  if (options.human_labels_path.empty()) return std::nullopt;
  return load_human_labels(options.human_labels_path);
}

void print_overall(const RunReport& report) {
  json aggregate = report_to_json(report).at("aggregates").at("overall");
  std::cout << "tasks: " << aggregate.at("n").get<std::int64_t>()
            << "  SR: " << aggregate.at("sr").at("pct").get<std::string>() << "%"
            << "  Sub-SR: " << aggregate.at("sub_sr").at("pct").get<std::string>()
            << "%  mean step ratio: "
            << aggregate.at("mean_step_ratio").at("avg").get<std::string>()
            << "\n";
  if (!report.reset.jobs.empty()) {
    std::cout << "reset jobs: " << report.reset.jobs.size()
              << "  reset SR: " << report.reset.reset_sr.percent_2dp() << "%\n";
  }
  for (const auto& [app_id, ok] : report.reset.restored) {
    std::cout << "restored " << app_id << ": " << (ok ? "yes" : "NO") << "\n";
  }
}

int cmd_run(const CommonOptions& options) {
  RunConfig config = build_config(options);
  TaskCorpus corpus = load_task_file(options.tasks_path);
  std::vector<MockApp> apps = load_mock_apps(options.apps_path);
  GoldenActions golden;
  if (!options.golden_path.empty()) golden = load_golden_actions(options.golden_path);
  RunReport report = run_benchmark(corpus, apps, golden, config, maybe_labels(options));
  print_overall(report);
  if (!options.out_dir.empty()) {
    std::cout << "report: " << options.out_dir << "/report.json\n";
  }
  return 0;
}

int cmd_eval(const CommonOptions& options, const std::string& run_dir) {
  TaskCorpus corpus = load_task_file(options.tasks_path);
  RunReport report = reevaluate(run_dir, corpus, maybe_labels(options));
  print_overall(report);
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    write_text_file(options.out_dir + "/report.json",
                    report_to_json(report).dump(2) + "\n");
    write_text_file(options.out_dir + "/summary.csv", report_summary_csv(report));
    std::cout << "report: " << options.out_dir << "/report.json\n";
  }
  return 0;
}

int cmd_reset(const CommonOptions& options) {
  TaskCorpus corpus = load_task_file(options.tasks_path);
  std::vector<MockApp> apps = load_mock_apps(options.apps_path);
  GoldenActions golden = load_golden_actions(options.golden_path);
  RunConfig config = build_config(options);

  EpochPlan plan = plan_epoch(corpus);
  std::map<std::string, DeviceEnv> envs;
  for (const MockApp& app : apps) envs.emplace(app.app_id, DeviceEnv(app));
  ResetReport report = execute_resets(plan, [&](const TaskSpec& reset_task) {
    auto it = envs.find(reset_task.app_id);
    if (it == envs.end()) {
      throw Error(ErrorCode::ConfigError,
                  "reset task \"" + reset_task.task_id +
                      "\" references unknown app \"" + reset_task.app_id + "\"");
    }
    it->second.position_home();
    auto golden_it = golden.find(reset_task.task_id);
    if (golden_it == golden.end()) {
      throw Error(ErrorCode::ConfigError,
                  "no golden actions for reset task \"" + reset_task.task_id + "\"");
    }
    auto agent = make_golden_replayer(golden_it->second);
    TaskAttempt attempt = run_scripted(*agent, it->second, reset_task, config);
    return ResetRunOutcome{attempt.result.outcome,
                           attempt.result.matched_clauses ==
                               attempt.result.clause_count};
  });
  std::cout << "reset jobs: " << report.jobs.size()
            << "  reset SR: " << report.reset_sr.percent_2dp() << "%\n";
  for (const ResetJobResult& job : report.jobs) {
    std::cout << "  " << job.reset_task_id << " [" << to_string(job.category)
              << "] serves " << job.serves.size() << ": "
              << to_string(job.outcome) << "\n";
  }
  return 0;
}

int cmd_report(const std::string& run_dir, const std::string& out_dir) {
  json stored = json::parse(read_text_file(run_dir + "/report.json"), nullptr, false);
  if (stored.is_discarded()) {
    throw Error(ErrorCode::SchemaError, "report.json is not valid JSON");
  }
  RunReport report;
  report.config_echo = stored.at("config");
  report.seed = stored.at("seed").get<std::uint64_t>();
  for (const json& entry : stored.at("tasks")) {
    report.task_results.push_back(task_result_from_json(entry));
  }
  std::string csv = report_summary_csv(report);
  std::cout << csv;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/summary.csv", csv);
  }
  return 0;
}

int cmd_validate(const CommonOptions& options) {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  TaskCorpus corpus;
  std::vector<MockApp> apps;
  bool loaded = true;
  try {
    corpus = load_task_file(options.tasks_path);
  } catch (const Error& error) {
    errors.push_back(error.what());
    loaded = false;
  }
  try {
    apps = load_mock_apps(options.apps_path);
  } catch (const Error& error) {
    errors.push_back(error.what());
    loaded = false;
  }

  if (loaded) {
    std::map<std::string, const MockApp*> app_index;
    for (const MockApp& app : apps) app_index[app.app_id] = &app;

    auto check_app = [&](const TaskSpec& task) {
      if (!app_index.count(task.app_id)) {
        errors.push_back("task \"" + task.task_id + "\" references unknown app \"" +
                         task.app_id + "\"");
        return false;
      }
      return true;
    };
    for (const TaskSpec& task : corpus.tasks) {
      check_app(task);
      if (task.subset == Subset::LongHorizon && task.golden_steps < 20) {
        warnings.push_back("long_horizon task \"" + task.task_id +
                           "\" has golden_steps < 20");
      }
      if (task.subset == Subset::NoiseRobust && app_index.count(task.app_id)) {
        const MockApp* app = app_index.at(task.app_id);
        if (app->delay_pages.empty() || app->popup_pages.empty()) {
          errors.push_back("noise_robust task \"" + task.task_id + "\" needs app \"" +
                           task.app_id + "\" to bundle delay and popup pages");
        }
      }
      if (task.reset_category == ResetCategory::Infeasible && task.reset_task_id) {
        errors.push_back("infeasible task \"" + task.task_id + "\" has a reset link");
      }
    }
    for (const TaskSpec& task : corpus.reset_tasks) check_app(task);

    try {
      plan_epoch(corpus);
    } catch (const Error& error) {
      errors.push_back(error.what());
    }

    // Render/parse closure over every page with defaults and each flag
    // toggled individually.
    for (const MockApp& app : apps) {
      std::vector<std::map<std::string, bool>> flag_sets{app.default_flags};
      for (const auto& [flag, value] : app.default_flags) {
        auto toggled = app.default_flags;
        toggled[flag] = !value;
        flag_sets.push_back(toggled);
      }
      for (const auto& [page_id, tree] : app.pages) {
        for (const auto& flags : flag_sets) {
          try {
            parse_ui_tree(render_page(tree, flags));
          } catch (const Error& error) {
            errors.push_back("app " + app.app_id + " page \"" + page_id +
                             "\" does not render to parseable XML: " + error.what());
          }
        }
      }
    }

    if (!options.golden_path.empty()) {
      GoldenActions golden;
      try {
        golden = load_golden_actions(options.golden_path);
      } catch (const Error& error) {
        errors.push_back(error.what());
      }
      RunConfig config;
      config.noise.probability = Ratio(0, 1);
      auto replay = [&](const TaskSpec& task, bool expect_success) {
        auto it = golden.find(task.task_id);
        if (it == golden.end()) {
          errors.push_back("no golden actions for task \"" + task.task_id + "\"");
          return;
        }
        if (!app_index.count(task.app_id)) return;
        DeviceEnv env(*app_index.at(task.app_id));
        auto agent = make_golden_replayer(it->second);
        TaskAttempt attempt = run_scripted(*agent, env, task, config);
        if (attempt.result.matched_clauses != attempt.result.clause_count) {
          errors.push_back("golden replay of \"" + task.task_id +
                           "\" does not satisfy its conditions");
        } else if (expect_success && attempt.result.outcome != Outcome::Success) {
          errors.push_back("golden replay of \"" + task.task_id +
                           "\" does not end in success");
        }
        if (expect_success &&
            attempt.result.steps_taken != task.golden_steps) {
          errors.push_back("golden replay of \"" + task.task_id + "\" takes " +
                           std::to_string(attempt.result.steps_taken) +
                           " steps, golden_steps says " +
                           std::to_string(task.golden_steps));
        }
      };
      for (const TaskSpec& task : corpus.tasks) replay(task, true);
      for (const TaskSpec& task : corpus.reset_tasks) replay(task, false);
    }
  }

  for (const std::string& warning : warnings) {
    std::cout << "warning: " << warning << "\n";
  }
  for (const std::string& error : errors) {
    std::cout << "error: " << error << "\n";
  }
  std::cout << (errors.empty() ? "corpus OK" : "corpus INVALID") << "\n";
  return errors.empty() ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"GUI-agent trajectory evaluation engine"};
  app.require_subcommand(1);

  CommonOptions options;
  std::string run_dir;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", options.seed, "RNG seed (else $TRAJEVAL_SEED, else 0)")
        ->each([&](const std::string&) { options.seed_given = true; });
  };

  CLI::App* run = app.add_subcommand("run", "run the benchmark");
  run->add_option("--tasks", options.tasks_path, "task file")->required();
  run->add_option("--apps", options.apps_path, "mock app file")->required();
  run->add_option("--golden", options.golden_path, "golden action file");
  run->add_option("--agent", options.agent,
                  "golden | early[:k] | looper[:action] | popup_blind | bernoulli[:p]");
  run->add_option("--noise-prob", options.noise_prob, "noise probability (default 0.2)");
  run->add_option("--noise-types", options.noise_types, "comma list of noise types");
  run->add_option("--step-multiplier", options.step_multiplier,
                  "step limit = ceil(multiplier * golden steps)");
  run->add_option("--runs", options.runs, "runs per task (pass@k)");
  run->add_option("--epochs", options.epochs, "benchmark+reset rounds");
  run->add_option("--workers", options.workers, "parallel app workers");
  run->add_option("--wait-ms", options.wait_ms, "post-action wait (live adapters)");
  run->add_option("--out", options.out_dir, "output directory");
  run->add_option("--human-labels", options.human_labels_path, "human label file");
  add_seed(run);

  CLI::App* eval = app.add_subcommand("eval", "re-evaluate stored trajectories");
  eval->add_option("--tasks", options.tasks_path, "task file")->required();
  eval->add_option("--run", run_dir, "run directory with manifest.json")->required();
  eval->add_option("--out", options.out_dir, "output directory");
  eval->add_option("--human-labels", options.human_labels_path, "human label file");

  CLI::App* reset = app.add_subcommand("reset", "execute the reset plan standalone");
  reset->add_option("--tasks", options.tasks_path, "task file")->required();
  reset->add_option("--apps", options.apps_path, "mock app file")->required();
  reset->add_option("--golden", options.golden_path, "golden action file")->required();
  reset->add_option("--step-multiplier", options.step_multiplier, "step limit factor");
  add_seed(reset);

  CLI::App* report = app.add_subcommand("report", "recompute summaries from a run");
  report->add_option("--run", run_dir, "run directory with report.json")->required();
  report->add_option("--out", options.out_dir, "output directory");

  CLI::App* validate = app.add_subcommand("validate", "lint a corpus");
  validate->add_option("--tasks", options.tasks_path, "task file")->required();
  validate->add_option("--apps", options.apps_path, "mock app file")->required();
  validate->add_option("--golden", options.golden_path,
                       "golden action file (enables replay checks)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& error) {
    return app.exit(error);
  }

  try {
    if (run->parsed()) return cmd_run(options);
    if (eval->parsed()) return cmd_eval(options, run_dir);
    if (reset->parsed()) return cmd_reset(options);
    if (report->parsed()) return cmd_report(run_dir, options.out_dir);
    if (validate->parsed()) return cmd_validate(options);
  } catch (const Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace trajeval
