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

#include "trajeval/evalengine.hpp"

namespace trajeval {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Success: return "success";
    case Outcome::EarlyTermination: return "early_termination";
    case Outcome::OverdueTermination: return "overdue_termination";
    case Outcome::Failure: return "failure";
  }
  return "";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
  if (text == "success") return Outcome::Success;
  if (text == "early_termination") return Outcome::EarlyTermination;
  if (text == "overdue_termination") return Outcome::OverdueTermination;
  if (text == "failure") return Outcome::Failure;
  return std::nullopt;
}

MatchReport match_trajectory(const Trajectory& trajectory,
                             const ConditionSet& condition) {
  MatchReport report;
  report.clause_hits.assign(condition.clauses.size(), std::nullopt);
  std::size_t next_clause = 0;
  for (const Step& step : trajectory.steps) {
    if (next_clause >= condition.clauses.size()) break;
    std::optional<Point> point = binding_point(step.action);
    if (eval_clause(condition.clauses[next_clause], *step.tree, point).matched) {
      report.clause_hits[next_clause] = step.index;
      ++next_clause;
    }
  }
  report.matched_count = static_cast<int>(next_clause);
  report.all_matched = next_clause == condition.clauses.size();
  return report;
}

Outcome classify_outcome(const Trajectory& trajectory, const MatchReport& report) {
  bool finished = trajectory.termination == Termination::FinishedAction;
  if (report.all_matched) {
    return finished ? Outcome::Success : Outcome::OverdueTermination;
  }
  return finished ? Outcome::EarlyTermination : Outcome::Failure;
}

Ratio sub_sr(const MatchReport& report) {
  if (report.clause_hits.empty()) return Ratio(0, 1);
  return Ratio(report.matched_count,
               static_cast<std::int64_t>(report.clause_hits.size()));
}

}  // namespace trajeval
