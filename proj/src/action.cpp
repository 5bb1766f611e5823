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

#include "trajeval/action.hpp"

#include <cctype>
#include <map>
#include <utility>
#include <vector>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

// Center of the 1080x2400 reference screen; synthesized when a dialect
// emits scroll without a start point.
constexpr Point kScreenCenter{540, 1200};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

struct Call {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : args) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

[[noreturn]] void malformed(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::MalformedAction,
              why + " in action \"" + std::string(text) + "\"");
}

// name '(' [key=value {',' key=value}] ')'
Call parse_call(std::string_view text) {
  Call call;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  };
  skip_ws();
  std::size_t name_start = pos;
  while (pos < text.size() &&
         (std::isalnum(static_cast<unsigned char>(text[pos])) ||
          text[pos] == '_')) {
    ++pos;
  }
  call.name = std::string(text.substr(name_start, pos - name_start));
  if (call.name.empty()) malformed(text, "expected an action name");
  skip_ws();
  if (pos >= text.size() || text[pos] != '(') malformed(text, "expected '('");
  ++pos;
  skip_ws();
  if (pos < text.size() && text[pos] == ')') {
    ++pos;
  } else {
    for (;;) {
      skip_ws();
      std::size_t key_start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) ||
              text[pos] == '_')) {
        ++pos;
      }
      std::string key(text.substr(key_start, pos - key_start));
      if (key.empty()) malformed(text, "expected an argument name");
      skip_ws();
      if (pos >= text.size() || text[pos] != '=') malformed(text, "expected '='");
      ++pos;
      skip_ws();
      if (pos >= text.size() || (text[pos] != '\'' && text[pos] != '"')) {
        malformed(text, "expected a quoted value");
      }
      char quote = text[pos++];
      std::string value;
      for (;;) {
        if (pos >= text.size()) malformed(text, "unterminated value");
        char c = text[pos++];
        if (c == quote) break;
        if (c == '\\' && pos < text.size()) {
          char esc = text[pos++];
          switch (esc) {
            case 'n': value.push_back('\n'); break;
            case 't': value.push_back('\t'); break;
            case 'r': value.push_back('\r'); break;
            case '\'': value.push_back('\''); break;
            case '"': value.push_back('"'); break;
            case '\\': value.push_back('\\'); break;
            default:
              // python keeps the backslash for unknown escapes
              value.push_back('\\');
              value.push_back(esc);
          }
        } else {
          value.push_back(c);
        }
      }
      call.args.emplace_back(std::move(key), std::move(value));
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      malformed(text, "expected ',' or ')'");
    }
  }
  skip_ws();
  if (pos != text.size()) malformed(text, "trailing characters");
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    for (std::size_t j = i + 1; j < call.args.size(); ++j) {
      if (call.args[i].first == call.args[j].first) {
        malformed(text, "duplicate argument '" + call.args[i].first + "'");
      }
    }
  }
  return call;
}

// "<point>x1 y1</point>"
Point parse_point_literal(std::string_view raw, std::string_view action_text) {
  std::string_view s = trim(raw);
  constexpr std::string_view open = "<point>";
  constexpr std::string_view close = "</point>";
  if (s.substr(0, open.size()) != open || s.size() < open.size() + close.size() ||
      s.substr(s.size() - close.size()) != close) {
    throw Error(ErrorCode::MalformedPoint,
                "expected <point>x y</point> in \"" + std::string(action_text) + "\"");
  }
  std::string_view body =
      trim(s.substr(open.size(), s.size() - open.size() - close.size()));
  int values[2];
  std::size_t pos = 0;
  for (int i = 0; i < 2; ++i) {
    while (pos < body.size() &&
           std::isspace(static_cast<unsigned char>(body[pos]))) {
      ++pos;
    }
    std::size_t start = pos;
    if (pos < body.size() && (body[pos] == '-' || body[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (pos < body.size() &&
           std::isdigit(static_cast<unsigned char>(body[pos]))) {
      ++pos;
    }
    if (pos == digits) {
      throw Error(ErrorCode::MalformedPoint,
                  "expected two integers in point of \"" +
                      std::string(action_text) + "\"");
    }
    values[i] = std::atoi(std::string(body.substr(start, pos - start)).c_str());
  }
  while (pos < body.size() &&
         std::isspace(static_cast<unsigned char>(body[pos]))) {
    ++pos;
  }
  if (pos != body.size()) {
    throw Error(ErrorCode::MalformedPoint,
                "trailing characters in point of \"" + std::string(action_text) + "\"");
  }
  return Point{values[0], values[1]};
}

struct KindSpec {
  ActionKind kind;
  bool wants_point;
  bool wants_content;
  bool content_required;
  bool wants_direction;
};

const KindSpec* kind_spec(std::string_view name) {
  static const std::map<std::string, KindSpec, std::less<>> specs = {
      {"click", {ActionKind::Click, true, false, false, false}},
      {"type", {ActionKind::Type, false, true, true, false}},
      {"scroll", {ActionKind::Scroll, true, false, false, true}},
      {"press_home", {ActionKind::PressHome, false, false, false, false}},
      {"press_back", {ActionKind::PressBack, false, false, false, false}},
      {"wait", {ActionKind::Wait, false, false, false, false}},
      {"long_press", {ActionKind::LongPress, true, false, false, false}},
      {"finished", {ActionKind::Finished, false, true, false, false}},
  };
  auto it = specs.find(name);
  return it == specs.end() ? nullptr : &it->second;
}

Action build_action(const Call& call, std::string_view text,
                    bool synthesize_scroll_point) {
  const KindSpec* spec = kind_spec(call.name);
  if (!spec) {
    throw Error(ErrorCode::UnknownActionKind,
                "unknown action \"" + call.name + "\"");
  }
  Action action;
  action.kind = spec->kind;
  for (const auto& [key, value] : call.args) {
    if (key == "point" && spec->wants_point) {
      action.point = parse_point_literal(value, text);
    } else if (key == "content" && spec->wants_content) {
      action.content = value;
    } else if (key == "direction" && spec->wants_direction) {
      auto direction = parse_direction(value);
      if (!direction) {
        malformed(text, "bad direction '" + value + "'");
      }
      action.direction = direction;
    } else {
      malformed(text, "unexpected argument '" + key + "'");
    }
  }
  if (spec->wants_point && !action.point) {
    if (spec->kind == ActionKind::Scroll && synthesize_scroll_point) {
      action.point = kScreenCenter;
    } else {
      throw Error(ErrorCode::MissingField,
                  call.name + " requires a point: \"" + std::string(text) + "\"");
    }
  }
  if (spec->content_required && !action.content) {
    throw Error(ErrorCode::MissingField,
                call.name + " requires content: \"" + std::string(text) + "\"");
  }
  if (spec->wants_direction && !action.direction) {
    throw Error(ErrorCode::MissingField,
                call.name + " requires a direction: \"" + std::string(text) + "\"");
  }
  return action;
}

Action parse_action_text(std::string_view text, bool synthesize_scroll_point) {
  return build_action(parse_call(text), text, synthesize_scroll_point);
}

std::string escape_value(const std::string& value) {
  std::string out;
  for (char c : value) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::map<TranslatorId, TranslatorFn>& translator_registry() {
  static std::map<TranslatorId, TranslatorFn> registry = {
      {"unified",
       [](std::string_view raw) { return parse_action_text(trim(raw), false); }},
      {"thought_action",
       [](std::string_view raw) {
         // Last line-anchored "Action:" marker; thought text may be in any
         // language and is ignored.
         constexpr std::string_view marker = "Action:";
         std::size_t found = std::string_view::npos;
         std::size_t line_start = 0;
         for (std::size_t i = 0; i <= raw.size(); ++i) {
           if (i == raw.size() || raw[i] == '\n') {
             std::string_view line = trim(raw.substr(line_start, i - line_start));
             if (line.substr(0, marker.size()) == marker) found = line_start;
             line_start = i + 1;
           }
         }
         if (found == std::string_view::npos) {
           throw Error(ErrorCode::NoActionFound,
                       "no \"Action:\" marker in agent output");
         }
         std::size_t line_end = raw.find('\n', found);
         std::string_view line = raw.substr(
             found, line_end == std::string_view::npos ? raw.size() - found
                                                       : line_end - found);
         std::string_view body = trim(trim(line).substr(marker.size()));
         return parse_action_text(body, true);
       }},
  };
  return registry;
}

}  // namespace

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Click: return "click";
    case ActionKind::Type: return "type";
    case ActionKind::Scroll: return "scroll";
    case ActionKind::PressHome: return "press_home";
    case ActionKind::PressBack: return "press_back";
    case ActionKind::Wait: return "wait";
    case ActionKind::LongPress: return "long_press";
    case ActionKind::Finished: return "finished";
  }
  return "";
}

std::string_view to_string(Direction direction) {
  switch (direction) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
  }
  return "";
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "up") return Direction::Up;
  if (text == "down") return Direction::Down;
  if (text == "left") return Direction::Left;
  if (text == "right") return Direction::Right;
  return std::nullopt;
}

std::optional<Point> binding_point(const Action& action) {
  switch (action.kind) {
    case ActionKind::Click:
    case ActionKind::LongPress:
    case ActionKind::Scroll:
      return action.point;
    default:
      return std::nullopt;
  }
}

Action parse_unified_action(std::string_view text) {
  return parse_action_text(text, false);
}

std::string format_unified_action(const Action& action) {
  std::string out(to_string(action.kind));
  out.push_back('(');
  bool first = true;
  auto sep = [&] {
    if (!first) out += ", ";
    first = false;
  };
  if (action.point) {
    sep();
    out += "point='<point>" + std::to_string(action.point->x) + " " +
           std::to_string(action.point->y) + "</point>'";
  }
  if (action.content) {
    sep();
    out += "content='" + escape_value(*action.content) + "'";
  }
  if (action.direction) {
    sep();
    out += "direction='" + std::string(to_string(*action.direction)) + "'";
  }
  out.push_back(')');
  return out;
}

Action translate_agent_output(std::string_view raw, const TranslatorId& dialect) {
  auto& registry = translator_registry();
  auto it = registry.find(dialect);
  if (it == registry.end()) {
    throw Error(ErrorCode::UnknownTranslator,
                "no translator registered for dialect \"" + dialect + "\"");
  }
  return it->second(raw);
}

void register_translator(const TranslatorId& id, TranslatorFn fn) {
  translator_registry()[id] = std::move(fn);
}

bool translator_registered(const TranslatorId& id) {
  return translator_registry().count(id) > 0;
}

}  // namespace trajeval
