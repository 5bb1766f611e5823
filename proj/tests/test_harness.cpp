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

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>

#include "testutil.hpp"
#include "trajeval/cli.hpp"
#include "trajeval/error.hpp"

using namespace trajeval;
using trajeval::testutil::corpus_path;
namespace fs = std::filesystem;

namespace {

struct CorpusFixture {
  TaskCorpus corpus = load_task_file(corpus_path("tasks.json"));
  std::vector<MockApp> apps = load_mock_apps(corpus_path("apps.json"));
  GoldenActions golden = load_golden_actions(corpus_path("golden_actions.json"));

  const MockApp& app(const std::string& id) const {
    for (const MockApp& candidate : apps) {
      if (candidate.app_id == id) return candidate;
    }
    throw Error(ErrorCode::ConfigError, "no app " + id);
  }
};

RunConfig quiet_config() {
  RunConfig config;
  config.noise.probability = Ratio(0, 1);
  return config;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("trajeval_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

class ThrowingAgent : public AgentAdapter {
 public:
  std::string decide(const AgentContext&) override {
    throw std::runtime_error("model went away");
  }
};

class GarbageAgent : public AgentAdapter {
 public:
  std::string decide(const AgentContext& context) override {
    if (context.history.empty()) return "I will now do something unparseable";
    return "Thought: give up\nAction: finished(content='eh')";
  }
};

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("golden replay succeeds with step ratio one") {
  CorpusFixture fixture;
  for (const TaskSpec& task : fixture.corpus.tasks) {
    CAPTURE(task.task_id);
    DeviceEnv env(fixture.app(task.app_id));
    auto agent = make_golden_replayer(fixture.golden.at(task.task_id));
    TaskAttempt attempt = run_scripted(*agent, env, task, quiet_config());
    CHECK(attempt.result.outcome == Outcome::Success);
    CHECK(attempt.result.steps_taken == task.golden_steps);
    CHECK(step_ratio(attempt.result.steps_taken, attempt.result.golden_steps) ==
          Ratio(1, 1));
    CHECK(attempt.trajectory.termination == Termination::FinishedAction);
  }
}

TEST_CASE("immediate finished is an early termination at ratio 1/golden") {
  CorpusFixture fixture;
  const TaskSpec& task = *fixture.corpus.find_task("mb.avatar_shuffle");
  DeviceEnv env(fixture.app("miniblog"));
  auto agent = make_early_stopper(0);
  TaskAttempt attempt = run_scripted(*agent, env, task, quiet_config());
  CHECK(attempt.result.outcome == Outcome::EarlyTermination);
  CHECK(attempt.result.steps_taken == 1);
  CHECK(step_ratio(attempt.result.steps_taken, task.golden_steps) ==
        Ratio(1, task.golden_steps));
}

TEST_CASE("a looper that satisfies the conditions mid-loop goes overdue") {
  // Two-page fixture where one repeated click first matches clause 1 on the
  // entry page, then clause 2 on the detail page, and then keeps clicking.
  std::vector<MockApp> apps = parse_mock_apps(R"({
    "apps": [{
      "app_id": "loopy",
      "initial_page": "a",
      "pages": [
        {"page_id": "a", "xml": "<hierarchy><node package='io.loopy' bounds='[0,0][1080,2400]'><node bounds='[100,400][900,700]' package='io.loopy'><node text='Open It' package='io.loopy' bounds='[150,450][850,650]'/></node></node></hierarchy>"},
        {"page_id": "b", "xml": "<hierarchy><node package='io.loopy' bounds='[0,0][1080,2400]'><node text='The Detail' package='io.loopy' bounds='[100,100][900,200]'/></node></hierarchy>"}
      ],
      "transitions": [
        {"from": "a", "action": "click", "region": "[100,400][900,700]", "to": "b"}
      ]
    }]
  })");
  TaskSpec task;
  task.task_id = "loopy.t";
  task.app_id = "loopy";
  task.subset = Subset::Base;
  task.golden_steps = 4;
  task.condition = parse_condition_set(
      "1.//*[@text=\"Open It\" and bbox_contains_point(../@bounds, $point)]\n"
      "2.//*[@text=\"The Detail\"]");
  DeviceEnv env(apps[0]);
  auto agent = make_looper("click(point='<point>500 500</point>')");
  TaskAttempt attempt = run_scripted(*agent, env, task, quiet_config());
  CHECK(attempt.result.outcome == Outcome::OverdueTermination);
  CHECK(attempt.result.steps_taken == 12);  // 3x golden cap
}

TEST_CASE("step cap is ceil(multiplier x golden steps)") {
  CorpusFixture fixture;
  const TaskSpec& task = *fixture.corpus.find_task("mb.search_cats");
  DeviceEnv env(fixture.app("miniblog"));
  RunConfig config = quiet_config();
  config.step_multiplier = Ratio::from_decimal("2.5");  // ceil(7.5) = 8
  auto agent = make_looper("wait()");
  TaskAttempt attempt = run_scripted(*agent, env, task, config);
  CHECK(attempt.result.steps_taken == 8);
  CHECK(attempt.result.outcome == Outcome::Failure);
}

TEST_CASE("untranslatable output burns the step as an error-tagged wait") {
  CorpusFixture fixture;
  const TaskSpec& task = *fixture.corpus.find_task("mb.search_cats");
  DeviceEnv env(fixture.app("miniblog"));
  GarbageAgent agent;
  TaskAttempt attempt = run_scripted(agent, env, task, quiet_config());
  REQUIRE(attempt.trajectory.steps.size() == 2);
  CHECK(attempt.trajectory.steps[0].action.kind == ActionKind::Wait);
  REQUIRE(attempt.trajectory.steps[0].error.has_value());
  CHECK(*attempt.trajectory.steps[0].error == "NoActionFound");
  CHECK(attempt.trajectory.steps[1].action.kind == ActionKind::Finished);
  CHECK(attempt.result.outcome == Outcome::EarlyTermination);
}

TEST_CASE("a throwing adapter truncates with step-limit termination") {
  CorpusFixture fixture;
  const TaskSpec& task = *fixture.corpus.find_task("mb.search_cats");
  DeviceEnv env(fixture.app("miniblog"));
  ThrowingAgent agent;
  TaskAttempt attempt = run_scripted(agent, env, task, quiet_config());
  CHECK(attempt.trajectory.steps.empty());
  CHECK(attempt.trajectory.termination == Termination::StepLimit);
  CHECK(attempt.result.outcome == Outcome::Failure);
}

TEST_CASE("popup-blind looper deadlocks to failure at the cap") {
  CorpusFixture fixture;
  const TaskSpec& task = *fixture.corpus.find_task("nr.search_cats");
  DeviceEnv env(fixture.app("miniblog"));
  RunConfig config;
  config.noise.probability = Ratio(1, 1);
  config.noise.enabled_types = {NoiseKind::PopUp};
  auto agent = make_popup_blind_looper();
  TaskAttempt attempt = run_scripted(*agent, env, task, config, 77);
  CHECK(attempt.result.outcome == Outcome::Failure);
  CHECK(attempt.result.steps_taken == config.step_limit(task.golden_steps));
  CHECK(attempt.result.noise_types_fired.at(NoiseKind::PopUp) == 1);
  // The masked view landed in the recorded trajectory.
  CHECK(attempt.trajectory.steps[1].ui_xml.find("popup_close") !=
        std::string::npos);
}

TEST_CASE("full benchmark with the golden agent is all success") {
  CorpusFixture fixture;
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("golden");
  config.seed = 5;
  RunReport report = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                   config);
  CHECK(report.task_results.size() == fixture.corpus.tasks.size());
  CHECK(success_rate(report.task_results) == Ratio(1, 1));
  for (const TaskResult& result : report.task_results) {
    CHECK(step_ratio(result.steps_taken, result.golden_steps) == Ratio(1, 1));
  }
  CHECK(report.reset.reset_sr == Ratio(1, 1));
  for (const auto& [app_id, restored] : report.reset.restored) {
    CAPTURE(app_id);
    CHECK(restored);
  }
}

TEST_CASE("run then reevaluate is a byte-identical fixed point") {
  CorpusFixture fixture;
  fs::path dir = fresh_dir("reeval");
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("golden");
  config.seed = 9;
  config.output_dir = dir.string();
  RunReport original = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                     config);
  std::string original_json = report_to_json(original).dump(2) + "\n";
  CHECK(read_text_file((dir / "report.json").string()) == original_json);

  RunReport again = reevaluate(dir.string(), fixture.corpus);
  CHECK(report_to_json(again).dump(2) + "\n" == original_json);
  fs::remove_all(dir);
}

TEST_CASE("an edited click point flips success to early termination") {
  CorpusFixture fixture;
  fs::path dir = fresh_dir("edited");
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("golden");
  config.output_dir = dir.string();
  run_benchmark(fixture.corpus, fixture.apps, fixture.golden, config);

  fs::path file = dir / "trajectories" / "mb.avatar_shuffle__e0_r0.jsonl";
  Trajectory trajectory = load_trajectory_file(file.string());
  // Move the shuffle click outside its parent bounds.
  trajectory.steps[2].action.point = Point{50, 2300};
  save_trajectory(trajectory, file.string());

  RunReport edited = reevaluate(dir.string(), fixture.corpus);
  for (const TaskResult& result : edited.task_results) {
    if (result.task_id == "mb.avatar_shuffle") {
      CHECK(result.outcome == Outcome::EarlyTermination);
      CHECK(result.matched_clauses == 1);
    } else {
      CHECK(result.outcome == Outcome::Success);
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("replaying a stored trajectory's actions reproduces its XML exactly") {
  CorpusFixture fixture;
  fs::path dir = fresh_dir("replay");
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("golden");
  config.output_dir = dir.string();
  run_benchmark(fixture.corpus, fixture.apps, fixture.golden, config);

  for (const char* name : {"mg.longhaul__e0_r0.jsonl", "mb.dark_mode__e0_r0.jsonl"}) {
    Trajectory stored =
        load_trajectory_file((dir / "trajectories" / name).string());
    const TaskSpec& task = *fixture.corpus.find_task(stored.task_id);
    DeviceEnv env(fixture.app(task.app_id));
    for (const Step& step : stored.steps) {
      CHECK(env.observe() == step.ui_xml);
      if (step.action.kind != ActionKind::Finished) env.execute(step.action);
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("reevaluate rejects trajectories for unknown tasks") {
  CorpusFixture fixture;
  fs::path dir = fresh_dir("unknown");
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("golden");
  config.output_dir = dir.string();
  run_benchmark(fixture.corpus, fixture.apps, fixture.golden, config);

  TaskCorpus trimmed = fixture.corpus;
  trimmed.tasks.erase(trimmed.tasks.begin());  // drop mb.avatar_shuffle
  try {
    reevaluate(dir.string(), trimmed);
    FAIL_CHECK("expected UnknownTaskId");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::UnknownTaskId);
  }
  fs::remove_all(dir);
}

TEST_CASE("bernoulli retries make pass@k climb and match the recount") {
  CorpusFixture fixture;
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("bernoulli:0.6");
  config.runs_per_task = 5;
  config.seed = 2024;
  RunReport report = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                   config);
  auto matrix = success_matrix(report.task_results);
  REQUIRE(matrix.size() == fixture.corpus.tasks.size());
  for (const auto& row : matrix) CHECK(row.size() == 5);

  Ratio p1 = pass_at_k(matrix, 1);
  Ratio p3 = pass_at_k(matrix, 3);
  Ratio p5 = pass_at_k(matrix, 5);
  CHECK(p1 <= p3);
  CHECK(p3 <= p5);
  CHECK(p1 < p5);  // 0.6 reliability over 5 runs separates these

  // Independent recount from the stored matrix.
  for (int k : {1, 3, 5}) {
    std::int64_t passed = 0;
    for (const auto& row : matrix) {
      for (int i = 0; i < k; ++i) {
        if (row[static_cast<std::size_t>(i)]) {
          ++passed;
          break;
        }
      }
    }
    CHECK(pass_at_k(matrix, k) ==
          Ratio(passed, static_cast<std::int64_t>(matrix.size())));
  }

  // Identical seeds reproduce the whole report; a different seed varies it.
  RunReport repeat = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                   config);
  CHECK(report_to_json(repeat).dump() == report_to_json(report).dump());
}

TEST_CASE("agreement section uses the human label side file") {
  CorpusFixture fixture;
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("golden");
  std::map<std::string, bool> labels;
  for (const TaskSpec& task : fixture.corpus.tasks) labels[task.task_id] = true;
  labels["mb.search_cats"] = false;  // one disagreement: auto success, human fail
  RunReport report = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                   config, labels);
  REQUIRE(report.agreement.has_value());
  CHECK(report.agreement->counts.fp == 1);
  CHECK(report.agreement->counts.tp ==
        static_cast<std::int64_t>(fixture.corpus.tasks.size()) - 1);

  RunReport unlabeled = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                      config);
  CHECK_FALSE(unlabeled.agreement.has_value());

  // Re-evaluation with the same side file reproduces the labeled report.
  fs::path dir = fresh_dir("labels");
  config.output_dir = dir.string();
  RunReport stored = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                   config, labels);
  RunReport again = reevaluate(dir.string(), fixture.corpus, labels);
  CHECK(report_to_json(again).dump(2) == report_to_json(stored).dump(2));
  fs::remove_all(dir);
}

TEST_CASE("empty corpus errors before any run") {
  CorpusFixture fixture;
  TaskCorpus empty;
  CHECK_THROWS_AS(run_benchmark(empty, fixture.apps, fixture.golden, quiet_config()),
                  Error);
}

TEST_CASE("per-app parallel workers reproduce the sequential report") {
  CorpusFixture fixture;
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("bernoulli:0.5");
  config.runs_per_task = 2;
  config.seed = 31;
  RunReport sequential = run_benchmark(fixture.corpus, fixture.apps,
                                       fixture.golden, config);
  config.workers = 3;
  RunReport parallel = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                     config);
  // Config echo differs in the workers field only; compare the rest.
  auto a = report_to_json(sequential);
  auto b = report_to_json(parallel);
  a["config"].erase("workers");
  b["config"].erase("workers");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("two epochs reset between rounds and still re-evaluate exactly") {
  CorpusFixture fixture;
  fs::path dir = fresh_dir("epochs");
  RunConfig config = quiet_config();
  config.agent = parse_agent_spec("golden");
  config.epochs = 2;
  config.seed = 12;
  config.output_dir = dir.string();
  RunReport report = run_benchmark(fixture.corpus, fixture.apps, fixture.golden,
                                   config);
  CHECK(report.task_results.size() == 2 * fixture.corpus.tasks.size());
  // Epoch 1 starts from reset state, so the flag task succeeds again.
  CHECK(success_rate(report.task_results) == Ratio(1, 1));
  CHECK(report.reset.jobs.size() == 4);  // 2 jobs x 2 epochs
  CHECK(report.reset.reset_sr == Ratio(1, 1));
  for (const auto& [app_id, restored] : report.reset.restored) CHECK(restored);

  RunReport again = reevaluate(dir.string(), fixture.corpus);
  CHECK(report_to_json(again).dump(2) == report_to_json(report).dump(2));
  fs::remove_all(dir);
}

TEST_CASE("a task that blows up mid-run is quarantined as a failure") {
  // Two noise-robust tasks under forced popups; the app backing the first
  // one bundles no template pages, so its attempt throws NoTemplatePages.
  std::vector<MockApp> apps = parse_mock_apps(R"({
    "apps": [
      {"app_id": "bare", "initial_page": "p",
       "pages": [{"page_id": "p", "xml": "<hierarchy><node text='lonely'/></hierarchy>"}]},
      {"app_id": "cushioned", "initial_page": "p",
       "pages": [{"page_id": "p", "xml": "<hierarchy><node text='target'/></hierarchy>"}],
       "noise_pages": {
         "delay": [{"page_id": "d", "xml": "<hierarchy><node text='Loading'/></hierarchy>"}],
         "popup": [{"page_id": "pp", "close_resource_id": "x:id/close",
           "xml": "<hierarchy><node text='ad'><node resource-id='x:id/close' bounds='[0,0][50,50]'/></node></hierarchy>"}]}}
    ]
  })");
  TaskCorpus corpus;
  TaskSpec doomed;
  doomed.task_id = "doomed";
  doomed.app_id = "bare";
  doomed.subset = Subset::NoiseRobust;
  doomed.golden_steps = 2;
  doomed.condition = parse_condition_set("//*[@text=\"lonely\"]");
  corpus.tasks.push_back(doomed);
  TaskSpec fine;
  fine.task_id = "fine";
  fine.app_id = "cushioned";
  fine.subset = Subset::NoiseRobust;
  fine.golden_steps = 2;
  fine.condition = parse_condition_set("//*[@text=\"target\"]");
  corpus.tasks.push_back(fine);

  GoldenActions golden{
      {"doomed", {"wait()", "finished(content='x')"}},
      {"fine", {"click(point='<point>10 10</point>')", "finished(content='x')"}},
  };
  RunConfig config;
  config.agent = parse_agent_spec("golden");
  config.noise.probability = Ratio(1, 1);
  config.noise.enabled_types = {NoiseKind::PopUp};
  RunReport report = run_benchmark(corpus, apps, golden, config);
  REQUIRE(report.task_results.size() == 2);
  CHECK(report.task_results[0].outcome == Outcome::Failure);
  CHECK(report.task_results[0].steps_taken == 0);
  // The popup fires for the healthy task too; its golden agent never closes
  // it, but the batch itself completes with both results present.
  CHECK(report.task_results[1].task_id == "fine");
}

TEST_CASE("TRAJEVAL_SEED is the --seed fallback") {
  CorpusFixture fixture;
  fs::path out = fresh_dir("envseed");
  setenv("TRAJEVAL_SEED", "7070", 1);
  CHECK(run_cli({"run", "--tasks", corpus_path("tasks.json"), "--apps",
                 corpus_path("apps.json"), "--golden",
                 corpus_path("golden_actions.json"), "--noise-prob", "0",
                 "--out", out.string()}) == 0);
  unsetenv("TRAJEVAL_SEED");
  auto manifest = nlohmann::json::parse(read_text_file((out / "manifest.json").string()));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 7070);
  fs::remove_all(out);
}

TEST_CASE("cli: validate, run, eval, report round trip") {
  fs::path out = fresh_dir("cli");
  fs::path out2 = fresh_dir("cli2");
  CHECK(run_cli({"validate", "--tasks", corpus_path("tasks.json"), "--apps",
                 corpus_path("apps.json"), "--golden",
                 corpus_path("golden_actions.json")}) == 0);
  CHECK(run_cli({"run", "--tasks", corpus_path("tasks.json"), "--apps",
                 corpus_path("apps.json"), "--golden",
                 corpus_path("golden_actions.json"), "--agent", "golden",
                 "--noise-prob", "0", "--seed", "3", "--out", out.string()}) == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "summary.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(run_cli({"eval", "--tasks", corpus_path("tasks.json"), "--run",
                 out.string(), "--out", out2.string()}) == 0);
  CHECK(read_text_file((out2 / "report.json").string()) ==
        read_text_file((out / "report.json").string()));
  CHECK(run_cli({"report", "--run", out.string()}) == 0);
  CHECK(run_cli({"reset", "--tasks", corpus_path("tasks.json"), "--apps",
                 corpus_path("apps.json"), "--golden",
                 corpus_path("golden_actions.json")}) == 0);
  // A completed batch exits 0 even when every task fails...
  fs::path out3 = fresh_dir("cli3");
  CHECK(run_cli({"run", "--tasks", corpus_path("tasks.json"), "--apps",
                 corpus_path("apps.json"), "--golden",
                 corpus_path("golden_actions.json"), "--agent", "early:0",
                 "--noise-prob", "0", "--out", out3.string()}) == 0);
  // ...while configuration and corpus errors exit 2.
  CHECK(run_cli({"run", "--tasks", corpus_path("missing.json"), "--apps",
                 corpus_path("apps.json")}) == 2);
  fs::remove_all(out);
  fs::remove_all(out2);
  fs::remove_all(out3);
}

}  // TEST_SUITE
