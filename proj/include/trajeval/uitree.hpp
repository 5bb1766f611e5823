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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajeval/geometry.hpp"

namespace trajeval {

/// The eight dump attributes the condition language can reference.
enum class UiAttribute {
  Text,
  ResourceId,
  Class,
  ContentDesc,
  Package,
  Selected,
  Clickable,
  Bounds,
};

/// Attribute spelling as written in dumps and conditions ("resource-id",
/// "content-desc", ...).
std::string_view to_string(UiAttribute attribute);
std::optional<UiAttribute> parse_ui_attribute(std::string_view name);

/// One node of a parsed UI hierarchy. String attributes are kept verbatim
/// (no trimming, case preserved); absent attributes read as "" / false.
/// Nodes are immutable after parse and owned by their parent (the root by
/// the UiTree), so parent pointers stay valid for the tree's lifetime.
struct UiNode {
  std::string text;
  std::string resource_id;
  std::string class_name;
  std::string content_desc;
  std::string package;
  bool selected = false;
  bool clickable = false;
  std::optional<Bounds> bounds;

  const UiNode* parent = nullptr;
  std::vector<std::unique_ptr<UiNode>> children;
};

/// Attribute value as the condition language sees it: booleans read
/// "true"/"false", bounds read in canonical "[x1,y1][x2,y2]" form ("" when
/// absent).
std::string attribute_string(const UiNode& node, UiAttribute attribute);

class UiTree {
 public:
  UiTree(std::unique_ptr<UiNode> root, std::string source_digest);

  const UiNode& root() const { return *root_; }

  /// Opaque identifier of the raw XML this tree was parsed from.
  const std::string& source_digest() const { return source_digest_; }

  /// Nodes in document order (preorder, children in document order).
  /// Stable across parses of identical input.
  const std::vector<const UiNode*>& nodes() const { return document_order_; }

 private:
  std::unique_ptr<UiNode> root_;
  std::string source_digest_;
  std::vector<const UiNode*> document_order_;
};

/// Parses a device XML hierarchy dump. Every element becomes a UiNode (tag
/// names do not matter; attributes carry the semantics); attributes outside
/// the eight known ones are ignored.
///
/// Throws ParseError{MalformedXml} on syntax errors and
/// Error{MalformedBounds} when a bounds attribute is present but does not
/// match the "[x1,y1][x2,y2]" shape.
UiTree parse_ui_tree(std::string_view xml_text);

}  // namespace trajeval
