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

#include <doctest.h>

#include "testutil.hpp"
#include "trajeval/error.hpp"
#include "trajeval/xml.hpp"

using namespace trajeval;

TEST_SUITE("uitree") {

TEST_CASE("attributes land on the node") {
  UiTree tree = parse_ui_tree(
      "<hierarchy><node text='My Favorite' "
      "resource-id='tv.danmaku.bili:id/title' class='android.widget.TextView' "
      "package='tv.danmaku.bili' selected='false' clickable='true' "
      "bounds='[565,1056][786,1105]'/></hierarchy>");
  REQUIRE(tree.root().children.size() == 1);
  const UiNode& node = *tree.root().children[0];
  CHECK(node.text == "My Favorite");
  CHECK(node.resource_id == "tv.danmaku.bili:id/title");
  CHECK(node.class_name == "android.widget.TextView");
  CHECK(node.package == "tv.danmaku.bili");
  CHECK_FALSE(node.selected);
  CHECK(node.clickable);
  REQUIRE(node.bounds.has_value());
  CHECK(*node.bounds == Bounds{565, 1056, 786, 1105});
}

TEST_CASE("single empty element defaults everything") {
  UiTree tree = parse_ui_tree("<node/>");
  const UiNode& root = tree.root();
  CHECK(root.text.empty());
  CHECK(root.resource_id.empty());
  CHECK(root.class_name.empty());
  CHECK(root.content_desc.empty());
  CHECK(root.package.empty());
  CHECK_FALSE(root.selected);
  CHECK_FALSE(root.clickable);
  CHECK_FALSE(root.bounds.has_value());
  CHECK(root.parent == nullptr);
  CHECK(tree.nodes().size() == 1);
}

TEST_CASE("three-level nesting builds the parent chain") {
  UiTree tree = parse_ui_tree(
      "<node text='a'><node text='b'><node text='c'/></node></node>");
  const UiNode* c = tree.nodes().back();
  CHECK(c->text == "c");
  REQUIRE(c->parent != nullptr);
  CHECK(c->parent->text == "b");
  REQUIRE(c->parent->parent != nullptr);
  CHECK(c->parent->parent->text == "a");
  CHECK(c->parent->parent->parent == nullptr);
}

TEST_CASE("parent and children links are mutually consistent") {
  DetRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    UiTree tree = parse_ui_tree(testutil::random_tree_xml(rng, 30));
    for (const UiNode* node : tree.nodes()) {
      for (const auto& child : node->children) {
        CHECK(child->parent == node);
      }
    }
  }
}

TEST_CASE("document order matches the XML and is stable") {
  std::string xml =
      "<root><node text='1'><node text='2'/><node text='3'/></node>"
      "<node text='4'/></root>";
  UiTree tree = parse_ui_tree(xml);
  std::vector<std::string> order;
  for (const UiNode* node : tree.nodes()) order.push_back(node->text);
  CHECK(order == std::vector<std::string>{"", "1", "2", "3", "4"});

  UiTree again = parse_ui_tree(xml);
  CHECK(again.source_digest() == tree.source_digest());
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    CHECK(again.nodes()[i]->text == tree.nodes()[i]->text);
  }
}

TEST_CASE("verbatim strings: no trimming, entities decoded") {
  UiTree tree = parse_ui_tree(
      "<node text='  Mixed CASE &amp; &quot;quoted&quot; &#33; '/>");
  CHECK(tree.root().text == "  Mixed CASE & \"quoted\" ! ");
}

TEST_CASE("malformed XML reports a position") {
  try {
    parse_ui_tree("<node text='a'>\n  <node text='b'\n</node>");
    FAIL_CHECK("expected MalformedXml");
  } catch (const ParseError& error) {
    CHECK(error.code() == ErrorCode::MalformedXml);
    CHECK(error.line() >= 2);
  }
  CHECK_THROWS_AS(parse_ui_tree(""), Error);
  CHECK_THROWS_AS(parse_ui_tree("<a></b>"), Error);
  CHECK_THROWS_AS(parse_ui_tree("<a/><b/>"), Error);
}

TEST_CASE("present but malformed bounds attribute errors") {
  try {
    parse_ui_tree("<node bounds='[1,2][3]'/>");
    FAIL_CHECK("expected MalformedBounds");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::MalformedBounds);
  }
}

TEST_CASE("declaration, comments, and unknown attributes are tolerated") {
  UiTree tree = parse_ui_tree(
      "<?xml version='1.0' encoding='UTF-8' standalone='yes' ?>\n"
      "<!-- dumped -->\n"
      "<hierarchy rotation=\"0\"><node index='0' checkable='false' "
      "text='ok'/></hierarchy>");
  CHECK(tree.nodes().size() == 2);
  CHECK(tree.root().children[0]->text == "ok");
}

TEST_CASE("write/parse closure on random trees") {
  DetRng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::string xml = testutil::random_tree_xml(rng, 40);
    xml::Element parsed = xml::parse_xml(xml);
    CHECK(xml::write_xml(parsed) == xml);
  }
}

TEST_CASE("attribute_string reads booleans and bounds canonically") {
  UiTree tree = parse_ui_tree("<node selected='true' bounds='[1,2][3,4]'/>");
  CHECK(attribute_string(tree.root(), UiAttribute::Selected) == "true");
  CHECK(attribute_string(tree.root(), UiAttribute::Clickable) == "false");
  CHECK(attribute_string(tree.root(), UiAttribute::Bounds) == "[1,2][3,4]");
  CHECK(attribute_string(tree.root(), UiAttribute::Text) == "");
}

}  // TEST_SUITE
