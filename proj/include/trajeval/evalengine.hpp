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

#include <optional>
#include <string_view>
#include <vector>

#include "trajeval/condlang.hpp"
#include "trajeval/rational.hpp"
#include "trajeval/trajectory.hpp"

namespace trajeval {

/// Where each clause matched under greedy earliest assignment; absent
/// entries never matched. Hit indices strictly increase.
struct MatchReport {
  std::vector<std::optional<int>> clause_hits;
  int matched_count = 0;
  bool all_matched = false;
};

enum class Outcome { Success, EarlyTermination, OverdueTermination, Failure };

std::string_view to_string(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view text);

/// Greedy earliest matching: steps are scanned in order and clause k+1 may
/// only match at a step strictly after clause k's hit. A clause matches a
/// step iff eval_clause holds on that step's (tree, action point). Greedy
/// earliest finds a full assignment whenever any strictly-increasing
/// assignment exists.
MatchReport match_trajectory(const Trajectory& trajectory,
                             const ConditionSet& condition);

/// The four-way outcome table:
///   all matched + finished     -> Success
///   all matched + step limit   -> OverdueTermination
///   not all matched + finished -> EarlyTermination
///   not all matched + limit    -> Failure
Outcome classify_outcome(const Trajectory& trajectory, const MatchReport& report);

/// matched clauses / total clauses, regardless of how the task ended.
Ratio sub_sr(const MatchReport& report);

}  // namespace trajeval
