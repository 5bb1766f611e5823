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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trajeval::xml {

/// Minimal element-and-attribute DOM for the device-dump dialect: elements,
/// attributes (order preserved, both quote styles), self-closing tags, an
/// optional XML declaration, comments, and the five named entities plus
/// numeric character references. Text content between elements is ignored
/// (device dumps never carry any). No namespaces, DTDs, or PIs.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;

  const std::string* find_attribute(std::string_view attr_name) const;
};

/// Parses a document with exactly one top-level element.
/// Throws ParseError{MalformedXml} with position on syntax errors.
Element parse_xml(std::string_view text);

/// Serializes with double-quoted attributes in stored order, "/>" for
/// childless elements, and standard escaping. Output re-parses to an equal
/// Element tree and is byte-stable for a given tree.
std::string write_xml(const Element& root);

std::string escape_attribute(std::string_view value);

}  // namespace trajeval::xml
