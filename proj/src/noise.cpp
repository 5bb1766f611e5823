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

#include "trajeval/noise.hpp"

#include "trajeval/error.hpp"

namespace trajeval {

void NoiseConfig::validate() const {
  if (probability < Ratio(0, 1) || Ratio(1, 1) < probability) {
    throw Error(ErrorCode::ConfigError, "noise probability must be in [0, 1]");
  }
  if (Ratio(0, 1) < probability && enabled_types.empty()) {
    throw Error(ErrorCode::ConfigError,
                "noise probability > 0 needs at least one enabled type");
  }
  if (!type_weights.empty()) {
    if (type_weights.size() != enabled_types.size()) {
      throw Error(ErrorCode::ConfigError,
                  "type_weights must align with enabled_types");
    }
    double total = 0;
    for (double w : type_weights) {
      if (w < 0) throw Error(ErrorCode::ConfigError, "negative type weight");
      total += w;
    }
    if (total <= 0) {
      throw Error(ErrorCode::ConfigError, "type weights sum to zero");
    }
  }
}

NoiseInjector::NoiseInjector(const NoiseConfig& config)
    : config_(config),
      schedule_rng_(derive_seed(config.seed, 0x5eed0001)),
      template_rng_(derive_seed(config.seed, 0x5eed0002)) {
  config_.validate();
}

std::optional<NoiseKind> NoiseInjector::sample_noise() {
  // Fixed budget: one draw for "fire?", one for "which type", consumed even
  // when the step stays clean so schedules never shift.
  double fire = schedule_rng_.next_unit();
  double which = schedule_rng_.next_unit();
  if (config_.enabled_types.empty()) return std::nullopt;
  if (fire >= config_.probability.to_double()) return std::nullopt;
  if (config_.type_weights.empty()) {
    std::size_t index = static_cast<std::size_t>(
        which * static_cast<double>(config_.enabled_types.size()));
    if (index >= config_.enabled_types.size()) {
      index = config_.enabled_types.size() - 1;
    }
    return config_.enabled_types[index];
  }
  double total = 0;
  for (double w : config_.type_weights) total += w;
  double target = which * total;
  double cumulative = 0;
  for (std::size_t i = 0; i < config_.enabled_types.size(); ++i) {
    cumulative += config_.type_weights[i];
    if (target < cumulative) return config_.enabled_types[i];
  }
  return config_.enabled_types.back();
}

Observation NoiseInjector::apply_noise(NoiseKind kind,
                                       const Action& pending_action,
                                       DeviceEnv& env, int step_index) {
  if (event_) {
    throw Error(ErrorCode::InvariantViolation,
                "apply_noise with an unresolved event pending");
  }
  switch (kind) {
    case NoiseKind::Repeat:
      env.execute(pending_action);
      env.execute(pending_action);
      return Observation{env.observe(), false};
    case NoiseKind::Unexecuted:
      // The action never reaches the device; the view is unchanged.
      return Observation{env.observe(), false};
    case NoiseKind::Delay: {
      const auto& pages = env.app().delay_pages;
      if (pages.empty()) {
        throw Error(ErrorCode::NoTemplatePages,
                    "app " + env.app().app_id + " has no delay template pages");
      }
      env.execute(pending_action);
      const DelayPage& page =
          pages[static_cast<std::size_t>(template_rng_.next_below(pages.size()))];
      NoiseEvent event;
      event.step_index = step_index;
      event.kind = NoiseKind::Delay;
      event.template_page_id = page.page_id;
      event.masked_xml = render_page(page.tree, env.flags());
      event_ = std::move(event);
      return Observation{event_->masked_xml, true};
    }
    case NoiseKind::PopUp: {
      const auto& pages = env.app().popup_pages;
      if (pages.empty()) {
        throw Error(ErrorCode::NoTemplatePages,
                    "app " + env.app().app_id + " has no popup template pages");
      }
      env.execute(pending_action);
      const PopupPage& page =
          pages[static_cast<std::size_t>(template_rng_.next_below(pages.size()))];
      NoiseEvent event;
      event.step_index = step_index;
      event.kind = NoiseKind::PopUp;
      event.template_page_id = page.page_id;
      event.masked_xml = render_page(page.tree, env.flags());
      event_ = std::move(event);
      return Observation{event_->masked_xml, true};
    }
  }
  return Observation{env.observe(), false};
}

Observation NoiseInjector::resolve_noise(const Action& next_action,
                                         DeviceEnv& env) {
  if (!event_) {
    throw Error(ErrorCode::InvariantViolation,
                "resolve_noise without an unresolved event");
  }
  if (event_->kind == NoiseKind::Delay) {
    // Waiting lets the true result page load; any other action executes on
    // the hidden real page. Either way the delay is over.
    if (next_action.kind != ActionKind::Wait) {
      env.execute(next_action);
    }
    event_.reset();
    return Observation{env.observe(), false};
  }
  // PopUp: only a click inside the close element's bounds clears it; any
  // other action bounces off the modal and leaves the device untouched.
  const PopupPage* popup = nullptr;
  for (const PopupPage& page : env.app().popup_pages) {
    if (page.page_id == event_->template_page_id) popup = &page;
  }
  if (popup && next_action.kind == ActionKind::Click && next_action.point &&
      bounds_contains(popup->close_bounds, *next_action.point)) {
    event_.reset();
    return Observation{env.observe(), false};
  }
  return Observation{event_->masked_xml, true};
}

}  // namespace trajeval
