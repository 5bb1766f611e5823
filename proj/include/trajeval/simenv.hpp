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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajeval/action.hpp"
#include "trajeval/geometry.hpp"
#include "trajeval/xml.hpp"

namespace trajeval {

// Deterministic mock device: a page-graph state machine per app. Pages are
// XML templates rendered against boolean state flags; transitions fire on
// (page, action) pairs and may mutate flags. press_home always returns to
// the initial page with flags preserved; an unmatched action is a no-op.

struct TransitionTrigger {
  ActionKind kind = ActionKind::Click;
  std::optional<Bounds> region;        // click/long_press/scroll point gate
  std::optional<Direction> direction;  // scroll only
};

struct Transition {
  std::string from_page;
  TransitionTrigger trigger;
  std::string to_page;
  std::map<std::string, bool> set_flags;
};

struct DelayPage {
  std::string page_id;
  xml::Element tree;
};

struct PopupPage {
  std::string page_id;
  xml::Element tree;
  // Bounds of the single designated close element (resolved at load from
  // the close_resource_id attribute lookup).
  Bounds close_bounds;
};

struct MockApp {
  std::string app_id;
  std::string initial_page;
  std::map<std::string, bool> default_flags;
  std::map<std::string, xml::Element> pages;
  std::vector<Transition> transitions;
  std::vector<DelayPage> delay_pages;
  std::vector<PopupPage> popup_pages;

  const xml::Element& page(const std::string& page_id) const;
};

/// Renders a page template against flags: elements gated by if-flag /
/// unless-flag attributes are kept or dropped, the gate attributes are
/// stripped, everything else is emitted verbatim. Pure; byte-stable.
std::string render_page(const xml::Element& tree,
                        const std::map<std::string, bool>& flags);

/// Loads {"apps": [...]} (see schemas/apps.schema.json) and validates the
/// page graph: pages exist, transitions are unambiguous per (page, action),
/// popup pages have exactly one close element with bounds, press_home
/// transitions are rejected (press_home is built in).
std::vector<MockApp> load_mock_apps(const std::string& path);
std::vector<MockApp> parse_mock_apps(std::string_view json_text);

class DeviceEnv {
 public:
  explicit DeviceEnv(const MockApp& app);

  const MockApp& app() const { return *app_; }
  const std::string& page_id() const { return page_; }
  const std::map<std::string, bool>& flags() const { return flags_; }
  int step_count() const { return steps_; }

  /// Applies the unique matching transition (declaration order; validation
  /// guarantees at most one can match). Unmatched actions are no-ops.
  /// press_home jumps to the initial page, flags preserved.
  void execute(const Action& action);

  /// Current page rendered in the dump dialect parse_ui_tree accepts.
  std::string observe() const;

  /// State hash over (page_id, flags); equal digests mean equal observable
  /// state.
  std::uint64_t digest() const;

  /// Repositions to the app's initial page, flags preserved. Used between
  /// tasks; does not count as a step.
  void position_home();

 private:
  const MockApp* app_;
  std::string page_;
  std::map<std::string, bool> flags_;
  int steps_ = 0;
};

}  // namespace trajeval
