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

#include "trajeval/simenv.hpp"

#include <set>

#include <json.hpp>

#include "trajeval/error.hpp"
#include "trajeval/rng.hpp"
#include "trajeval/trajectory.hpp"
#include "trajeval/uitree.hpp"

namespace trajeval {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& why) {
  throw Error(ErrorCode::SchemaError, why);
}

std::string get_string(const json& object, const std::string& key,
                       const std::string& what) {
  if (!object.contains(key) || !object.at(key).is_string()) {
    schema_error(what + " needs string field \"" + key + "\"");
  }
  return object.at(key).get<std::string>();
}

std::optional<ActionKind> parse_action_kind(std::string_view text) {
  for (ActionKind kind :
       {ActionKind::Click, ActionKind::Type, ActionKind::Scroll,
        ActionKind::PressHome, ActionKind::PressBack, ActionKind::Wait,
        ActionKind::LongPress, ActionKind::Finished}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

bool has_point(ActionKind kind) {
  return kind == ActionKind::Click || kind == ActionKind::LongPress ||
         kind == ActionKind::Scroll;
}

bool rects_overlap(const Bounds& a, const Bounds& b) {
  return a.x1 <= b.x2 && b.x1 <= a.x2 && a.y1 <= b.y2 && b.y1 <= a.y2;
}

void render_into(const xml::Element& element,
                 const std::map<std::string, bool>& flags, xml::Element& out) {
  xml::Element rendered;
  rendered.name = element.name;
  for (const auto& [name, value] : element.attributes) {
    if (name == "if-flag" || name == "unless-flag") continue;
    rendered.attributes.emplace_back(name, value);
  }
  for (const xml::Element& child : element.children) {
    bool keep = true;
    if (const std::string* flag = child.find_attribute("if-flag")) {
      auto it = flags.find(*flag);
      keep = it != flags.end() && it->second;
    } else if (const std::string* flag = child.find_attribute("unless-flag")) {
      auto it = flags.find(*flag);
      keep = !(it != flags.end() && it->second);
    }
    if (keep) render_into(child, flags, rendered);
  }
  out.children.push_back(std::move(rendered));
}

void validate_transitions(const MockApp& app) {
  for (const Transition& t : app.transitions) {
    if (!app.pages.count(t.from_page)) {
      schema_error("app " + app.app_id + ": transition from unknown page \"" +
                   t.from_page + "\"");
    }
    if (!app.pages.count(t.to_page)) {
      schema_error("app " + app.app_id + ": transition to unknown page \"" +
                   t.to_page + "\"");
    }
    if (t.trigger.kind == ActionKind::PressHome) {
      schema_error("app " + app.app_id +
                   ": press_home transitions are not allowed (built in)");
    }
    if (t.trigger.region && !has_point(t.trigger.kind)) {
      schema_error("app " + app.app_id + ": a region needs a pointed action");
    }
    if (t.trigger.direction && t.trigger.kind != ActionKind::Scroll) {
      schema_error("app " + app.app_id + ": direction is for scroll only");
    }
    if (t.trigger.kind == ActionKind::Scroll && !t.trigger.direction) {
      schema_error("app " + app.app_id + ": scroll transitions need a direction");
    }
    for (const auto& [flag, _] : t.set_flags) {
      if (!app.default_flags.count(flag)) {
        schema_error("app " + app.app_id + ": transition sets unknown flag \"" +
                     flag + "\"");
      }
    }
  }
  // Determinism: at most one transition can match any (page, action).
  for (std::size_t i = 0; i < app.transitions.size(); ++i) {
    for (std::size_t j = i + 1; j < app.transitions.size(); ++j) {
      const Transition& a = app.transitions[i];
      const Transition& b = app.transitions[j];
      if (a.from_page != b.from_page || a.trigger.kind != b.trigger.kind) continue;
      if (a.trigger.kind == ActionKind::Scroll &&
          a.trigger.direction != b.trigger.direction) {
        continue;
      }
      if (has_point(a.trigger.kind) && a.trigger.region && b.trigger.region &&
          !rects_overlap(*a.trigger.region, *b.trigger.region)) {
        continue;
      }
      schema_error("app " + app.app_id + ": ambiguous transitions from \"" +
                   a.from_page + "\" on " + std::string(to_string(a.trigger.kind)));
    }
  }
}

MockApp parse_app(const json& object) {
  MockApp app;
  app.app_id = get_string(object, "app_id", "app entry");
  const std::string where = "app " + app.app_id;
  app.initial_page = get_string(object, "initial_page", where);

  if (object.contains("state_flags")) {
    for (const auto& [name, value] : object.at("state_flags").items()) {
      if (!value.is_boolean()) schema_error(where + ": flags must be boolean");
      app.default_flags[name] = value.get<bool>();
    }
  }

  if (!object.contains("pages") || !object.at("pages").is_array() ||
      object.at("pages").empty()) {
    schema_error(where + " needs a non-empty \"pages\" array");
  }
  for (const json& page : object.at("pages")) {
    std::string page_id = get_string(page, "page_id", where + " page");
    if (app.pages.count(page_id)) {
      schema_error(where + ": duplicate page \"" + page_id + "\"");
    }
    app.pages[page_id] = xml::parse_xml(get_string(page, "xml", where + " page"));
  }
  if (!app.pages.count(app.initial_page)) {
    schema_error(where + ": initial page \"" + app.initial_page + "\" not defined");
  }

  if (object.contains("transitions")) {
    for (const json& entry : object.at("transitions")) {
      Transition t;
      t.from_page = get_string(entry, "from", where + " transition");
      t.to_page = get_string(entry, "to", where + " transition");
      auto kind = parse_action_kind(get_string(entry, "action", where + " transition"));
      if (!kind) schema_error(where + ": unknown trigger action");
      t.trigger.kind = *kind;
      if (entry.contains("region")) {
        t.trigger.region =
            parse_bounds(get_string(entry, "region", where + " transition"));
      }
      if (entry.contains("direction")) {
        t.trigger.direction = parse_direction(
            get_string(entry, "direction", where + " transition"));
        if (!t.trigger.direction) schema_error(where + ": unknown direction");
      }
      if (entry.contains("set_flags")) {
        for (const auto& [name, value] : entry.at("set_flags").items()) {
          if (!value.is_boolean()) {
            schema_error(where + ": set_flags values must be boolean");
          }
          t.set_flags[name] = value.get<bool>();
        }
      }
      app.transitions.push_back(std::move(t));
    }
  }

  if (object.contains("noise_pages")) {
    const json& noise = object.at("noise_pages");
    if (noise.contains("delay")) {
      for (const json& entry : noise.at("delay")) {
        DelayPage page;
        page.page_id = get_string(entry, "page_id", where + " delay page");
        page.tree = xml::parse_xml(get_string(entry, "xml", where + " delay page"));
        app.delay_pages.push_back(std::move(page));
      }
    }
    if (noise.contains("popup")) {
      for (const json& entry : noise.at("popup")) {
        PopupPage page;
        page.page_id = get_string(entry, "page_id", where + " popup page");
        page.tree = xml::parse_xml(get_string(entry, "xml", where + " popup page"));
        std::string close_id =
            get_string(entry, "close_resource_id", where + " popup page");
        // Exactly one close element, and it must carry bounds.
        UiTree tree = parse_ui_tree(render_page(page.tree, {}));
        const UiNode* close = nullptr;
        for (const UiNode* node : tree.nodes()) {
          if (node->resource_id == close_id) {
            if (close) {
              schema_error(where + ": popup \"" + page.page_id +
                           "\" has multiple close elements");
            }
            close = node;
          }
        }
        if (!close || !close->bounds) {
          schema_error(where + ": popup \"" + page.page_id +
                       "\" needs one close element with bounds");
        }
        page.close_bounds = *close->bounds;
        app.popup_pages.push_back(std::move(page));
      }
    }
  }

  validate_transitions(app);
  return app;
}

}  // namespace

const xml::Element& MockApp::page(const std::string& page_id) const {
  auto it = pages.find(page_id);
  if (it == pages.end()) {
    throw Error(ErrorCode::InvariantViolation,
                "app " + app_id + " has no page \"" + page_id + "\"");
  }
  return it->second;
}

std::string render_page(const xml::Element& tree,
                        const std::map<std::string, bool>& flags) {
  xml::Element holder;
  render_into(tree, flags, holder);
  return xml::write_xml(holder.children.front());
}

std::vector<MockApp> parse_mock_apps(std::string_view json_text) {
  json document = json::parse(json_text, nullptr, false);
  if (document.is_discarded()) schema_error("app file is not valid JSON");
  if (!document.contains("apps") || !document.at("apps").is_array() ||
      document.at("apps").empty()) {
    schema_error("app file needs a non-empty \"apps\" array");
  }
  std::vector<MockApp> apps;
  std::set<std::string> ids;
  for (const json& entry : document.at("apps")) {
    MockApp app = parse_app(entry);
    if (!ids.insert(app.app_id).second) {
      schema_error("duplicate app_id \"" + app.app_id + "\"");
    }
    apps.push_back(std::move(app));
  }
  return apps;
}

std::vector<MockApp> load_mock_apps(const std::string& path) {
  return parse_mock_apps(read_text_file(path));
}

DeviceEnv::DeviceEnv(const MockApp& app)
    : app_(&app), page_(app.initial_page), flags_(app.default_flags) {}

void DeviceEnv::execute(const Action& action) {
  ++steps_;
  if (action.kind == ActionKind::PressHome) {
    page_ = app_->initial_page;
    return;
  }
  for (const Transition& t : app_->transitions) {
    if (t.from_page != page_ || t.trigger.kind != action.kind) continue;
    if (t.trigger.region) {
      if (!action.point || !bounds_contains(*t.trigger.region, *action.point)) {
        continue;
      }
    }
    if (t.trigger.direction && action.direction != t.trigger.direction) continue;
    for (const auto& [flag, value] : t.set_flags) flags_[flag] = value;
    page_ = t.to_page;
    return;
  }
  // No declared transition: the device does nothing.
}

std::string DeviceEnv::observe() const {
  return render_page(app_->page(page_), flags_);
}

std::uint64_t DeviceEnv::digest() const {
  std::string state = page_;
  for (const auto& [name, value] : flags_) {
    state.push_back('|');
    state += name;
    state.push_back(value ? '1' : '0');
  }
  return fnv1a64(state);
}

void DeviceEnv::position_home() { page_ = app_->initial_page; }

}  // namespace trajeval
