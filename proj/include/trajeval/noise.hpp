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
#include <optional>
#include <string>
#include <vector>

#include "trajeval/action.hpp"
#include "trajeval/noise_types.hpp"
#include "trajeval/rational.hpp"
#include "trajeval/rng.hpp"
#include "trajeval/simenv.hpp"

namespace trajeval {

struct NoiseConfig {
  Ratio probability{1, 5};  // fire chance per step
  std::vector<NoiseKind> enabled_types{NoiseKind::Repeat, NoiseKind::Unexecuted,
                                       NoiseKind::Delay, NoiseKind::PopUp};
  // Optional per-type weights aligned with enabled_types; uniform when empty.
  std::vector<double> type_weights;
  std::uint64_t seed = 0;

  /// Throws Error{ConfigError} on violation: probability in [0,1],
  /// enabled_types non-empty when probability > 0, weights aligned.
  void validate() const;
};

/// An injected Delay/PopUp that still masks the agent's view.
struct NoiseEvent {
  int step_index = 0;
  NoiseKind kind = NoiseKind::Delay;
  std::string template_page_id;
  std::string masked_xml;  // what the agent sees while unresolved
  bool resolved = false;
};

/// What the agent is shown after an (possibly noisy) execution step.
struct Observation {
  std::string xml;
  bool masked = false;  // true while a Delay/PopUp template hides the device
};

/// Per-run noise state machine. The fire/type schedule and the template
/// choice draw from two independent streams derived from the seed, so the
/// schedule for a given seed never shifts with template-page counts.
/// Repeat/Unexecuted perturb the execution itself; Delay/PopUp execute the
/// action hidden and mask the view with a template page until resolved.
class NoiseInjector {
 public:
  explicit NoiseInjector(const NoiseConfig& config);

  /// Fire decision for one step: with probability p picks an enabled kind
  /// (uniform, or per configured weights). Always consumes exactly two
  /// draws from the schedule stream, fired or not.
  std::optional<NoiseKind> sample_noise();

  /// Injects `kind` around the pending action and returns what the agent
  /// sees. Requires no unresolved event. Throws Error{NoTemplatePages} when
  /// Delay/PopUp is requested for an app without template pages.
  Observation apply_noise(NoiseKind kind, const Action& pending_action,
                          DeviceEnv& env, int step_index);

  /// Drives an unresolved event with the agent's next action:
  ///   Delay + wait           -> reveal the hidden page, resolved
  ///   Delay + other action   -> execute it on the hidden page, reveal
  ///   PopUp + close click    -> reveal, resolved
  ///   PopUp + anything else  -> popup persists, device untouched
  Observation resolve_noise(const Action& next_action, DeviceEnv& env);

  bool has_unresolved() const { return event_.has_value(); }
  const std::optional<NoiseEvent>& unresolved_event() const { return event_; }

 private:
  NoiseConfig config_;
  DetRng schedule_rng_;
  DetRng template_rng_;
  std::optional<NoiseEvent> event_;
};

}  // namespace trajeval
