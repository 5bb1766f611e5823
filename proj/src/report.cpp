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

#include "trajeval/report.hpp"

#include <algorithm>
#include <map>

#include "trajeval/error.hpp"

namespace trajeval {

using nlohmann::json;

json ratio_json(const Ratio& ratio) {
  return json{{"num", ratio.num()}, {"den", ratio.den()}};
}

json percent_json(const Ratio& ratio) {
  json out = ratio_json(ratio);
  out["pct"] = ratio.percent_2dp();
  return out;
}

json task_result_json(const TaskResult& result) {
  json hits = json::array();
  for (const auto& hit : result.clause_hits) {
    if (hit) hits.push_back(*hit);
    else hits.push_back(nullptr);
  }
  json noise = json::object();
  for (const auto& [kind, count] : result.noise_types_fired) {
    noise[std::string(to_string(kind))] = count;
  }
  return json{{"task_id", result.task_id},
              {"epoch", result.epoch},
              {"run", result.run},
              {"outcome", std::string(to_string(result.outcome))},
              {"sub_sr", ratio_json(result.sub_sr)},
              {"matched_clauses", result.matched_clauses},
              {"clause_count", result.clause_count},
              {"clause_hits", hits},
              {"steps_taken", result.steps_taken},
              {"golden_steps", result.golden_steps},
              {"step_ratio", ratio_json(step_ratio(result.steps_taken,
                                                   result.golden_steps))},
              {"subset", std::string(to_string(result.subset))},
              {"difficulty", std::string(to_string(result.difficulty))},
              {"noise_fired", noise},
              {"trajectory", result.trajectory_path}};
}

TaskResult task_result_from_json(const json& object) {
  TaskResult result;
  result.task_id = object.at("task_id").get<std::string>();
  result.epoch = object.at("epoch").get<int>();
  result.run = object.at("run").get<int>();
  auto outcome = parse_outcome(object.at("outcome").get<std::string>());
  if (!outcome) throw Error(ErrorCode::SchemaError, "unknown outcome in report");
  result.outcome = *outcome;
  result.sub_sr = Ratio(object.at("sub_sr").at("num").get<std::int64_t>(),
                        object.at("sub_sr").at("den").get<std::int64_t>());
  result.matched_clauses = object.at("matched_clauses").get<int>();
  result.clause_count = object.at("clause_count").get<int>();
  for (const json& hit : object.at("clause_hits")) {
    if (hit.is_null()) result.clause_hits.push_back(std::nullopt);
    else result.clause_hits.push_back(hit.get<int>());
  }
  result.steps_taken = object.at("steps_taken").get<int>();
  result.golden_steps = object.at("golden_steps").get<int>();
  auto subset = parse_subset(object.at("subset").get<std::string>());
  if (!subset) throw Error(ErrorCode::SchemaError, "unknown subset in report");
  result.subset = *subset;
  std::string difficulty = object.at("difficulty").get<std::string>();
  if (difficulty == "easy") result.difficulty = Difficulty::Easy;
  else if (difficulty == "medium") result.difficulty = Difficulty::Medium;
  else if (difficulty == "hard") result.difficulty = Difficulty::Hard;
  else throw Error(ErrorCode::SchemaError, "unknown difficulty in report");
  for (const auto& [name, count] : object.at("noise_fired").items()) {
    auto kind = parse_noise_kind(name);
    if (!kind) throw Error(ErrorCode::SchemaError, "unknown noise kind in report");
    result.noise_types_fired[*kind] = count.get<int>();
  }
  result.trajectory_path = object.at("trajectory").get<std::string>();
  return result;
}

namespace {

json aggregate_block(const std::vector<TaskResult>& results) {
  json block;
  block["n"] = results.size();
  block["sr"] = percent_json(success_rate(results));
  block["sub_sr"] = percent_json(mean_sub_sr(results));
  Ratio msr = mean_step_ratio(results);
  json msr_json = ratio_json(msr);
  msr_json["avg"] = msr.decimal_2dp();
  block["mean_step_ratio"] = msr_json;
  json outcomes;
  for (const auto& [outcome, fraction] : failure_distribution(results)) {
    outcomes[std::string(to_string(outcome))] = percent_json(fraction);
  }
  block["outcomes"] = outcomes;
  return block;
}

constexpr Subset kSubsets[] = {Subset::Base, Subset::LongTail,
                               Subset::LongHorizon, Subset::GuiReasoning,
                               Subset::NoiseRobust};
constexpr Difficulty kDifficulties[] = {Difficulty::Easy, Difficulty::Medium,
                                        Difficulty::Hard};
constexpr NoiseKind kNoiseKinds[] = {NoiseKind::Repeat, NoiseKind::Unexecuted,
                                     NoiseKind::Delay, NoiseKind::PopUp};

template <typename Filter>
std::vector<TaskResult> filtered(const std::vector<TaskResult>& results,
                                 Filter&& keep) {
  std::vector<TaskResult> out;
  for (const TaskResult& result : results) {
    if (keep(result)) out.push_back(result);
  }
  return out;
}

json reset_json(const ResetReport& reset) {
  json jobs = json::array();
  for (const ResetJobResult& job : reset.jobs) {
    json serves = json::array();
    for (const std::string& task_id : job.serves) serves.push_back(task_id);
    jobs.push_back(json{{"reset_task_id", job.reset_task_id},
                        {"category", std::string(to_string(job.category))},
                        {"serves", serves},
                        {"outcome", std::string(to_string(job.outcome))},
                        {"all_matched", job.all_matched}});
  }
  json restored = json::object();
  for (const auto& [app_id, ok] : reset.restored) restored[app_id] = ok;
  return json{{"jobs", jobs},
              {"reset_sr", percent_json(reset.reset_sr)},
              {"restored", restored}};
}

json agreement_json(const AgreementReport& agreement) {
  return json{{"tp", agreement.counts.tp},
              {"fp", agreement.counts.fp},
              {"fn", agreement.counts.fn},
              {"tn", agreement.counts.tn},
              {"auto_sr", percent_json(agreement.auto_sr)},
              {"human_sr", percent_json(agreement.human_sr)},
              {"accuracy", percent_json(agreement.accuracy)}};
}

}  // namespace

std::vector<std::vector<bool>> success_matrix(const std::vector<TaskResult>& results) {
  // Rows keyed by task in first-seen order; columns in (epoch, run) order,
  // which matches the results ordering the harness produces.
  std::vector<std::string> order;
  std::map<std::string, std::vector<bool>> rows;
  for (const TaskResult& result : results) {
    if (!rows.count(result.task_id)) {
      order.push_back(result.task_id);
      rows[result.task_id] = {};
    }
    rows[result.task_id].push_back(result.outcome == Outcome::Success);
  }
  std::vector<std::vector<bool>> matrix;
  matrix.reserve(order.size());
  for (const std::string& task_id : order) matrix.push_back(rows[task_id]);
  return matrix;
}

json report_to_json(const RunReport& report) {
  json out;
  out["config"] = report.config_echo;
  out["seed"] = report.seed;

  json tasks = json::array();
  for (const TaskResult& result : report.task_results) {
    tasks.push_back(task_result_json(result));
  }
  out["tasks"] = tasks;

  json aggregates;
  aggregates["overall"] = aggregate_block(report.task_results);
  json by_subset = json::object();
  for (Subset subset : kSubsets) {
    auto group = filtered(report.task_results, [subset](const TaskResult& r) {
      return r.subset == subset;
    });
    if (!group.empty()) by_subset[std::string(to_string(subset))] = aggregate_block(group);
  }
  aggregates["by_subset"] = by_subset;
  json by_difficulty = json::object();
  for (Difficulty difficulty : kDifficulties) {
    auto group = filtered(report.task_results, [difficulty](const TaskResult& r) {
      return r.difficulty == difficulty;
    });
    if (!group.empty()) {
      by_difficulty[std::string(to_string(difficulty))] = aggregate_block(group);
    }
  }
  aggregates["by_difficulty"] = by_difficulty;
  json by_noise = json::object();
  for (NoiseKind kind : kNoiseKinds) {
    auto group = filtered(report.task_results, [kind](const TaskResult& r) {
      return r.noise_types_fired.count(kind) > 0;
    });
    if (!group.empty()) by_noise[std::string(to_string(kind))] = aggregate_block(group);
  }
  aggregates["by_noise_type"] = by_noise;
  out["aggregates"] = aggregates;

  auto matrix = success_matrix(report.task_results);
  std::size_t runs = matrix.empty() ? 0 : matrix.front().size();
  bool rectangular = true;
  for (const auto& row : matrix) rectangular = rectangular && row.size() == runs;
  if (rectangular && runs > 1) {
    json pass;
    for (std::size_t k = 1; k <= runs; ++k) {
      pass[std::to_string(k)] = percent_json(pass_at_k(matrix, static_cast<int>(k)));
    }
    out["pass_at_k"] = pass;
  }

  out["reset"] = reset_json(report.reset);
  if (report.agreement) out["agreement"] = agreement_json(*report.agreement);
  return out;
}

std::string report_summary_csv(const RunReport& report) {
  std::string csv =
      "subset,difficulty,n,sr,sub_sr,mean_step_ratio,success,"
      "early_termination,overdue_termination,failure\n";
  for (Subset subset : kSubsets) {
    for (Difficulty difficulty : kDifficulties) {
      auto group = filtered(report.task_results,
                            [subset, difficulty](const TaskResult& r) {
                              return r.subset == subset &&
                                     r.difficulty == difficulty;
                            });
      if (group.empty()) continue;
      auto distribution = failure_distribution(group);
      csv += std::string(to_string(subset)) + "," +
             std::string(to_string(difficulty)) + "," +
             std::to_string(group.size()) + "," +
             success_rate(group).percent_2dp() + "," +
             mean_sub_sr(group).percent_2dp() + "," +
             mean_step_ratio(group).decimal_2dp() + "," +
             distribution[Outcome::Success].percent_2dp() + "," +
             distribution[Outcome::EarlyTermination].percent_2dp() + "," +
             distribution[Outcome::OverdueTermination].percent_2dp() + "," +
             distribution[Outcome::Failure].percent_2dp() + "\n";
    }
  }
  return csv;
}

}  // namespace trajeval
