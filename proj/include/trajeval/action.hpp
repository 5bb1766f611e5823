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

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "trajeval/geometry.hpp"

namespace trajeval {

// The unified action grammar:
//
//   click(point='<point>x1 y1</point>')
//   type(content='...')
//   scroll(point='<point>x1 y1</point>', direction='...')
//   press_home()
//   press_back()
//   wait()
//   long_press(point='<point>x1 y1</point>')
//   finished(content='xxx')
//
// Values take single or double quotes and python-style escapes (\n, \t,
// \r, \', \", \\); a trailing "\n" in type content is the submit marker and
// is preserved through parsing.

enum class ActionKind {
  Click,
  Type,
  Scroll,
  PressHome,
  PressBack,
  Wait,
  LongPress,
  Finished,
};

enum class Direction { Up, Down, Left, Right };

std::string_view to_string(ActionKind kind);
std::string_view to_string(Direction direction);
std::optional<Direction> parse_direction(std::string_view text);

struct Action {
  ActionKind kind = ActionKind::Wait;
  std::optional<Point> point;          // click/long_press; scroll start point
  std::optional<std::string> content;  // type (required), finished (optional)
  std::optional<Direction> direction;  // scroll only

  friend bool operator==(const Action&, const Action&) = default;
};

/// The interaction point a condition's $point binds to: click/long_press
/// point and scroll start point; unbound for everything else.
std::optional<Point> binding_point(const Action& action);

/// Throws Error{UnknownActionKind | MissingField | MalformedPoint |
/// MalformedAction}.
Action parse_unified_action(std::string_view text);

/// Canonical single-quoted form; format(parse(s)) is a fixed point.
std::string format_unified_action(const Action& action);

// --------------------------------------------------------------------------
// Agent-output translators. A translator takes one raw model turn and
// produces a unified Action. The reference "thought_action" dialect expects
// a "Thought: ...\nAction: <unified action>" turn and synthesizes a
// screen-center start point for point-less scroll actions; "unified"
// expects the bare action text.

using TranslatorId = std::string;
using TranslatorFn = std::function<Action(std::string_view)>;

/// Throws Error{NoActionFound} when the dialect's marker is missing,
/// Error{UnknownTranslator} for unregistered dialects; parse errors
/// propagate from parse_unified_action.
Action translate_agent_output(std::string_view raw, const TranslatorId& dialect);

void register_translator(const TranslatorId& id, TranslatorFn fn);
bool translator_registered(const TranslatorId& id);

}  // namespace trajeval
