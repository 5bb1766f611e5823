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

#include <string>
#include <string_view>

namespace trajeval {

/// Screen coordinate in pixels, origin top-left.
struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned pixel rectangle in the device-dump "[x1,y1][x2,y2]" shape.
/// Invariant: x1 <= x2 and y1 <= y2. Coordinates may be negative
/// (off-screen elements).
struct Bounds {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  Point center() const { return Point{(x1 + x2) / 2, (y1 + y2) / 2}; }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Parses "[x1,y1][x2,y2]". Throws Error{MalformedBounds} when the shape is
/// wrong or the ordering invariant is violated.
Bounds parse_bounds(std::string_view text);

/// Canonical form, no whitespace: "[x1,y1][x2,y2]".
std::string format_bounds(const Bounds& bounds);

/// Inclusive on all four edges.
bool bounds_contains(const Bounds& bounds, const Point& point);

}  // namespace trajeval
