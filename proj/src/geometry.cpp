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

#include "trajeval/geometry.hpp"

#include <cctype>
#include <cstdlib>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

[[noreturn]] void bad_bounds(std::string_view text, const char* why) {
  throw Error(ErrorCode::MalformedBounds,
              std::string(why) + " in bounds \"" + std::string(text) + "\"");
}

// One signed decimal integer; advances pos past it.
int read_int(std::string_view text, std::size_t& pos) {
  std::size_t start = pos;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
  std::size_t digits = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == digits) bad_bounds(text, "expected integer");
  return std::atoi(std::string(text.substr(start, pos - start)).c_str());
}

void expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) bad_bounds(text, "unexpected character");
  ++pos;
}

}  // namespace

Bounds parse_bounds(std::string_view text) {
  std::size_t pos = 0;
  Bounds b;
  expect(text, pos, '[');
  b.x1 = read_int(text, pos);
  expect(text, pos, ',');
  b.y1 = read_int(text, pos);
  expect(text, pos, ']');
  expect(text, pos, '[');
  b.x2 = read_int(text, pos);
  expect(text, pos, ',');
  b.y2 = read_int(text, pos);
  expect(text, pos, ']');
  if (pos != text.size()) bad_bounds(text, "trailing characters");
  if (b.x1 > b.x2 || b.y1 > b.y2) bad_bounds(text, "inverted interval");
  return b;
}

std::string format_bounds(const Bounds& b) {
  return "[" + std::to_string(b.x1) + "," + std::to_string(b.y1) + "][" +
         std::to_string(b.x2) + "," + std::to_string(b.y2) + "]";
}

bool bounds_contains(const Bounds& b, const Point& p) {
  return b.x1 <= p.x && p.x <= b.x2 && b.y1 <= p.y && p.y <= b.y2;
}

}  // namespace trajeval
