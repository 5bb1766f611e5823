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

#include <doctest.h>

#include "trajeval/error.hpp"
#include "trajeval/rng.hpp"

using namespace trajeval;

namespace {

TaskResult result_with(Outcome outcome, int steps, int golden, Ratio sub) {
  TaskResult result;
  result.outcome = outcome;
  result.steps_taken = steps;
  result.golden_steps = golden;
  result.sub_sr = sub;
  return result;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("step-based difficulty bands with exact boundaries") {
  CHECK(difficulty_by_steps(1) == Difficulty::Easy);
  CHECK(difficulty_by_steps(4) == Difficulty::Easy);
  CHECK(difficulty_by_steps(7) == Difficulty::Easy);
  CHECK(difficulty_by_steps(8) == Difficulty::Medium);
  CHECK(difficulty_by_steps(19) == Difficulty::Medium);
  CHECK(difficulty_by_steps(20) == Difficulty::Hard);
  CHECK(difficulty_by_steps(31) == Difficulty::Hard);
}

TEST_CASE("weight-based difficulty bands with exact boundaries") {
  using A = ExplorationAbility;
  CHECK(difficulty_by_weight({A::IconUnderstanding}) == Difficulty::Easy);  // 0.5
  CHECK(difficulty_by_weight({A::HiddenFunctionDiscovery}) == Difficulty::Easy);  // 1.0
  CHECK(difficulty_by_weight({A::IconUnderstanding, A::HiddenFunctionDiscovery}) ==
        Difficulty::Medium);  // 1.5
  CHECK(difficulty_by_weight({A::HierarchicalNavigation}) == Difficulty::Medium);  // 2.0
  CHECK(difficulty_by_weight({A::HierarchicalNavigation, A::IconUnderstanding}) ==
        Difficulty::Hard);  // 2.5
  CHECK(difficulty_by_weight({A::HierarchicalNavigation, A::HiddenFunctionDiscovery}) ==
        Difficulty::Hard);  // 3.0
  // The timer decomposition: one deep navigation plus two hidden functions.
  CHECK(difficulty_by_weight({A::HierarchicalNavigation, A::HiddenFunctionDiscovery,
                              A::HiddenFunctionDiscovery}) == Difficulty::Hard);  // 4.0
  CHECK(difficulty_by_weight({}) == Difficulty::Easy);
}

TEST_CASE("success rate and distribution") {
  std::vector<TaskResult> results;
  for (int i = 0; i < 539; ++i) {
    results.push_back(result_with(Outcome::Success, 4, 4, Ratio(1, 1)));
  }
  for (int i = 0; i < 541; ++i) {
    results.push_back(result_with(Outcome::Failure, 12, 4, Ratio(0, 1)));
  }
  CHECK(success_rate(results).percent_2dp() == "49.91");  // 539/1080

  std::vector<TaskResult> mixed{
      result_with(Outcome::Success, 4, 4, Ratio(1, 1)),
      result_with(Outcome::Success, 4, 4, Ratio(1, 1)),
      result_with(Outcome::EarlyTermination, 2, 4, Ratio(1, 2)),
      result_with(Outcome::OverdueTermination, 12, 4, Ratio(1, 1)),
      result_with(Outcome::Failure, 12, 4, Ratio(0, 1)),
      result_with(Outcome::Failure, 12, 4, Ratio(0, 1)),
      result_with(Outcome::Failure, 12, 4, Ratio(1, 3)),
      result_with(Outcome::EarlyTermination, 1, 4, Ratio(0, 1)),
      result_with(Outcome::Success, 4, 4, Ratio(1, 1)),
      result_with(Outcome::Success, 8, 4, Ratio(1, 1)),
  };
  auto distribution = failure_distribution(mixed);
  Ratio total;
  for (const auto& [outcome, fraction] : distribution) total = total + fraction;
  CHECK(total == Ratio(1, 1));
  CHECK(distribution[Outcome::Success] == Ratio(4, 10));

  CHECK(success_rate({result_with(Outcome::Failure, 1, 1, Ratio(0, 1))}) ==
        Ratio(0, 1));
  CHECK_THROWS_AS(success_rate({}), Error);
}

TEST_CASE("step ratio is exact and capped by construction") {
  CHECK(step_ratio(4, 4) == Ratio(1, 1));
  CHECK(step_ratio(15, 5) == Ratio(3, 1));
  CHECK(step_ratio(9, 6) == Ratio(3, 2));
}

TEST_CASE("pass@k by definition and against a recount") {
  // Single task vector [0,0,0,1,0].
  std::vector<std::vector<bool>> one_task{{false, false, false, true, false}};
  CHECK(pass_at_k(one_task, 3) == Ratio(0, 1));
  CHECK(pass_at_k(one_task, 5) == Ratio(1, 1));

  std::vector<std::vector<bool>> zeros{{false, false}, {false, false}};
  CHECK(pass_at_k(zeros, 1) == Ratio(0, 1));
  CHECK(pass_at_k(zeros, 2) == Ratio(0, 1));

  try {
    pass_at_k(one_task, 6);
    FAIL_CHECK("expected InsufficientRuns");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::InsufficientRuns);
  }

  // Seeded random matrix: pass@k equals direct enumeration and is monotone.
  DetRng rng(97);
  std::vector<std::vector<bool>> matrix;
  for (int task = 0; task < 40; ++task) {
    std::vector<bool> runs;
    for (int run = 0; run < 5; ++run) runs.push_back(rng.next_below(3) == 0);
    matrix.push_back(runs);
  }
  Ratio previous(0, 1);
  for (int k = 1; k <= 5; ++k) {
    std::int64_t recount = 0;
    for (const auto& runs : matrix) {
      bool any = false;
      for (int i = 0; i < k; ++i) any = any || runs[static_cast<std::size_t>(i)];
      if (any) ++recount;
    }
    Ratio value = pass_at_k(matrix, k);
    CHECK(value == Ratio(recount, 40));
    CHECK(previous <= value);
    previous = value;
  }
}

TEST_CASE("agreement arithmetic reproduces the published confusion rows") {
  AgreementReport overall = agreement_from_counts({534, 5, 22, 519});
  CHECK(overall.auto_sr.percent_2dp() == "49.91");
  CHECK(overall.human_sr.percent_2dp() == "51.48");
  CHECK(overall.accuracy.percent_2dp() == "97.50");

  AgreementReport long_horizon = agreement_from_counts({9, 0, 0, 51});
  CHECK(long_horizon.auto_sr.percent_2dp() == "15.00");
  CHECK(long_horizon.human_sr.percent_2dp() == "15.00");
  CHECK(long_horizon.accuracy.percent_2dp() == "100.00");
}

TEST_CASE("agreement over aligned sequences") {
  std::vector<Outcome> outcomes{Outcome::Success, Outcome::Failure,
                                Outcome::Success, Outcome::EarlyTermination};
  std::vector<bool> labels{true, false, true, false};
  AgreementReport report = agreement(outcomes, labels);
  CHECK(report.counts.tp == 2);
  CHECK(report.counts.tn == 2);
  CHECK(report.counts.fp == 0);
  CHECK(report.counts.fn == 0);
  CHECK(report.accuracy == Ratio(1, 1));
  // accuracy == 1 - (fp+fn)/n
  AgreementReport noisy = agreement({Outcome::Success, Outcome::Failure},
                                    {false, true});
  CHECK(noisy.accuracy ==
        Ratio(1, 1) + Ratio(-(noisy.counts.fp + noisy.counts.fn), 2));

  try {
    agreement(outcomes, {true});
    FAIL_CHECK("expected LengthMismatch");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("mean sub-sr and mean step ratio stay rational") {
  std::vector<TaskResult> results{
      result_with(Outcome::Success, 3, 3, Ratio(1, 1)),
      result_with(Outcome::Failure, 9, 3, Ratio(1, 3)),
      result_with(Outcome::Failure, 6, 3, Ratio(1, 3)),
  };
  CHECK(mean_sub_sr(results) == Ratio(5, 9));
  CHECK(mean_step_ratio(results) == Ratio(2, 1));
}

}  // TEST_SUITE
