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

#include "trajeval/xml.hpp"

#include <cctype>
#include <cstdint>

#include "trajeval/error.hpp"

namespace trajeval::xml {

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '-' || c == '.';
}

// UTF-8 encode one code point; dumps use references like &#10; for newlines.
void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  Element parse_document() {
    skip_prolog();
    Element root = parse_element();
    skip_misc();
    if (pos_ != text_.size()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(ErrorCode::MalformedXml, why, pos_, line, column);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char take() {
    if (eof()) fail("unexpected end of input");
    return text_[pos_++];
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  bool try_consume(std::string_view s) {
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  void skip_comment() {
    // already consumed "<!--"
    std::size_t end = text_.find("-->", pos_);
    if (end == std::string_view::npos) fail("unterminated comment");
    pos_ = end + 3;
  }

  void skip_prolog() {
    skip_ws();
    if (try_consume("<?xml")) {
      std::size_t end = text_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_misc();
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (try_consume("<!--")) {
        skip_comment();
        continue;
      }
      return;
    }
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string parse_entity() {
    // already consumed '&'
    std::size_t semi = text_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 10) {
      fail("unterminated entity reference");
    }
    std::string_view body = text_.substr(pos_, semi - pos_);
    pos_ = semi + 1;
    std::string out;
    if (body == "amp") out = "&";
    else if (body == "lt") out = "<";
    else if (body == "gt") out = ">";
    else if (body == "quot") out = "\"";
    else if (body == "apos") out = "'";
    else if (!body.empty() && body[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      std::size_t i = hex ? 2 : 1;
      if (i >= body.size()) fail("empty character reference");
      for (; i < body.size(); ++i) {
        char c = body[i];
        std::uint32_t digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (hex && c >= 'a' && c <= 'f') digit = 10 + (c - 'a');
        else if (hex && c >= 'A' && c <= 'F') digit = 10 + (c - 'A');
        else { fail("bad character reference"); }
        cp = cp * (hex ? 16 : 10) + digit;
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity &" + std::string(body) + ";");
    }
    return out;
  }

  std::string parse_attribute_value() {
    char quote = take();
    if (quote != '"' && quote != '\'') fail("expected a quoted attribute value");
    std::string value;
    for (;;) {
      if (eof()) fail("unterminated attribute value");
      char c = take();
      if (c == quote) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        value += parse_entity();
      } else {
        value.push_back(c);
      }
    }
    return value;
  }

  Element parse_element() {
    expect('<');
    Element element;
    element.name = parse_name();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (try_consume("/>")) return element;
      if (try_consume(">")) break;
      std::string attr_name = parse_name();
      skip_ws();
      expect('=');
      skip_ws();
      std::string value = parse_attribute_value();
      for (const auto& [existing, _] : element.attributes) {
        if (existing == attr_name) fail("duplicate attribute " + attr_name);
      }
      element.attributes.emplace_back(std::move(attr_name), std::move(value));
    }
    // Children until the matching end tag. Bare text is skipped.
    for (;;) {
      std::size_t lt = text_.find('<', pos_);
      if (lt == std::string_view::npos) fail("missing end tag for " + element.name);
      pos_ = lt;
      if (try_consume("<!--")) {
        skip_comment();
        continue;
      }
      if (text_.substr(pos_, 2) == "</") {
        pos_ += 2;
        std::string closing = parse_name();
        if (closing != element.name) {
          fail("end tag " + closing + " does not match " + element.name);
        }
        skip_ws();
        expect('>');
        return element;
      }
      element.children.push_back(parse_element());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void write_element(const Element& element, std::string& out) {
  out.push_back('<');
  out += element.name;
  for (const auto& [name, value] : element.attributes) {
    out.push_back(' ');
    out += name;
    out += "=\"";
    out += escape_attribute(value);
    out.push_back('"');
  }
  if (element.children.empty()) {
    out += "/>";
    return;
  }
  out.push_back('>');
  for (const Element& child : element.children) write_element(child, out);
  out += "</";
  out += element.name;
  out.push_back('>');
}

}  // namespace

const std::string* Element::find_attribute(std::string_view attr_name) const {
  for (const auto& [name, value] : attributes) {
    if (name == attr_name) return &value;
  }
  return nullptr;
}

Element parse_xml(std::string_view text) {
  return Scanner(text).parse_document();
}

std::string write_xml(const Element& root) {
  std::string out;
  write_element(root, out);
  return out;
}

std::string escape_attribute(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace trajeval::xml
