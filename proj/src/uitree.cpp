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

#include "trajeval/uitree.hpp"

#include "trajeval/error.hpp"
#include "trajeval/rng.hpp"
#include "trajeval/xml.hpp"

namespace trajeval {

std::string_view to_string(UiAttribute attribute) {
  switch (attribute) {
    case UiAttribute::Text: return "text";
    case UiAttribute::ResourceId: return "resource-id";
    case UiAttribute::Class: return "class";
    case UiAttribute::ContentDesc: return "content-desc";
    case UiAttribute::Package: return "package";
    case UiAttribute::Selected: return "selected";
    case UiAttribute::Clickable: return "clickable";
    case UiAttribute::Bounds: return "bounds";
  }
  return "";
}

std::optional<UiAttribute> parse_ui_attribute(std::string_view name) {
  if (name == "text") return UiAttribute::Text;
  if (name == "resource-id") return UiAttribute::ResourceId;
  if (name == "class") return UiAttribute::Class;
  if (name == "content-desc") return UiAttribute::ContentDesc;
  if (name == "package") return UiAttribute::Package;
  if (name == "selected") return UiAttribute::Selected;
  if (name == "clickable") return UiAttribute::Clickable;
  if (name == "bounds") return UiAttribute::Bounds;
  return std::nullopt;
}

std::string attribute_string(const UiNode& node, UiAttribute attribute) {
  switch (attribute) {
    case UiAttribute::Text: return node.text;
    case UiAttribute::ResourceId: return node.resource_id;
    case UiAttribute::Class: return node.class_name;
    case UiAttribute::ContentDesc: return node.content_desc;
    case UiAttribute::Package: return node.package;
    case UiAttribute::Selected: return node.selected ? "true" : "false";
    case UiAttribute::Clickable: return node.clickable ? "true" : "false";
    case UiAttribute::Bounds:
      return node.bounds ? format_bounds(*node.bounds) : "";
  }
  return "";
}

namespace {

std::unique_ptr<UiNode> build_node(const xml::Element& element,
                                   const UiNode* parent) {
  auto node = std::make_unique<UiNode>();
  node->parent = parent;
  for (const auto& [name, value] : element.attributes) {
    if (name == "text") node->text = value;
    else if (name == "resource-id") node->resource_id = value;
    else if (name == "class") node->class_name = value;
    else if (name == "content-desc") node->content_desc = value;
    else if (name == "package") node->package = value;
    else if (name == "selected") node->selected = (value == "true");
    else if (name == "clickable") node->clickable = (value == "true");
    else if (name == "bounds") node->bounds = parse_bounds(value);
    // Other dump attributes (index, checkable, enabled, ...) are ignored.
  }
  node->children.reserve(element.children.size());
  for (const xml::Element& child : element.children) {
    node->children.push_back(build_node(child, node.get()));
  }
  return node;
}

void collect_preorder(const UiNode* node, std::vector<const UiNode*>& out) {
  out.push_back(node);
  for (const auto& child : node->children) collect_preorder(child.get(), out);
}

}  // namespace

UiTree::UiTree(std::unique_ptr<UiNode> root, std::string source_digest)
    : root_(std::move(root)), source_digest_(std::move(source_digest)) {
  collect_preorder(root_.get(), document_order_);
}

UiTree parse_ui_tree(std::string_view xml_text) {
  xml::Element document = xml::parse_xml(xml_text);
  return UiTree(build_node(document, nullptr), hex64(fnv1a64(xml_text)));
}

}  // namespace trajeval
