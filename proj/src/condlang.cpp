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

#include "trajeval/condlang.hpp"

#include <cctype>
#include <cstdlib>

#include "trajeval/error.hpp"

namespace trajeval {

PredPtr make_and(PredPtr lhs, PredPtr rhs) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::And;
  p->lhs = std::move(lhs);
  p->rhs = std::move(rhs);
  return p;
}

PredPtr make_or(PredPtr lhs, PredPtr rhs) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::Or;
  p->lhs = std::move(lhs);
  p->rhs = std::move(rhs);
  return p;
}

PredPtr make_equals(AttrRef ref, std::string literal) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::Equals;
  p->ref = ref;
  p->literal = std::move(literal);
  return p;
}

PredPtr make_contains(AttrRef ref, std::string literal) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::Contains;
  p->ref = ref;
  p->literal = std::move(literal);
  return p;
}

PredPtr make_bbox_contains_point(Axis axis) {
  auto p = std::make_shared<Pred>();
  p->kind = Pred::Kind::BboxContainsPoint;
  p->ref = AttrRef{axis, UiAttribute::Bounds};
  return p;
}

bool pred_equal(const Pred& a, const Pred& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Pred::Kind::And:
    case Pred::Kind::Or:
      return pred_equal(*a.lhs, *b.lhs) && pred_equal(*a.rhs, *b.rhs);
    case Pred::Kind::Equals:
    case Pred::Kind::Contains:
      return a.ref == b.ref && a.literal == b.literal;
    case Pred::Kind::BboxContainsPoint:
      return a.ref == b.ref;
  }
  return false;
}

bool structurally_equal(const Selector& a, const Selector& b) {
  return pred_equal(*a.predicate, *b.predicate);
}

bool structurally_equal(const Clause& a, const Clause& b) {
  if (a.selectors.size() != b.selectors.size()) return false;
  for (std::size_t i = 0; i < a.selectors.size(); ++i) {
    if (!structurally_equal(a.selectors[i], b.selectors[i])) return false;
  }
  return true;
}

bool structurally_equal(const ConditionSet& a, const ConditionSet& b) {
  if (a.clauses.size() != b.clauses.size()) return false;
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    if (!structurally_equal(a.clauses[i], b.clauses[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class TokenKind {
  SelectorHead,  // //*
  LBracket,
  RBracket,
  LParen,
  RParen,
  Comma,
  Equals,
  SelfAttr,    // @name
  ParentAttr,  // ../@name
  PointVar,    // $point
  String,
  Ident,  // and / or / contains / bbox_contains_point / anything alphabetic
  Integer,
  Dot,
  End,
};

struct Token {
  TokenKind kind;
  std::string text;  // attr name, string value, ident text, or digits
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& why,
                            ErrorCode code = ErrorCode::SyntaxError) const {
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(code, why, offset, line, column);
  }

  [[noreturn]] void fail(const std::string& why,
                         ErrorCode code = ErrorCode::SyntaxError) const {
    fail_at(current_.offset, why, code);
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    current_.offset = pos_;
    current_.text.clear();
    if (pos_ >= text_.size()) {
      current_.kind = TokenKind::End;
      return;
    }
    char c = text_[pos_];
    if (text_.substr(pos_, 3) == "//*") {
      pos_ += 3;
      current_.kind = TokenKind::SelectorHead;
      return;
    }
    if (text_.substr(pos_, 4) == "../@") {
      pos_ += 4;
      current_.kind = TokenKind::ParentAttr;
      current_.text = read_attr_name();
      return;
    }
    switch (c) {
      case '[': ++pos_; current_.kind = TokenKind::LBracket; return;
      case ']': ++pos_; current_.kind = TokenKind::RBracket; return;
      case '(': ++pos_; current_.kind = TokenKind::LParen; return;
      case ')': ++pos_; current_.kind = TokenKind::RParen; return;
      case ',': ++pos_; current_.kind = TokenKind::Comma; return;
      case '=': ++pos_; current_.kind = TokenKind::Equals; return;
      case '.': ++pos_; current_.kind = TokenKind::Dot; return;
      case '@':
        ++pos_;
        current_.kind = TokenKind::SelfAttr;
        current_.text = read_attr_name();
        return;
      case '$': {
        if (text_.substr(pos_, 6) == "$point") {
          pos_ += 6;
          current_.kind = TokenKind::PointVar;
          return;
        }
        fail_at(pos_, "unknown variable (only $point exists)");
      }
      case '"':
      case '\'': {
        char quote = c;
        std::size_t start = ++pos_;
        while (pos_ < text_.size() && text_[pos_] != quote) ++pos_;
        if (pos_ >= text_.size()) fail_at(start - 1, "unterminated string literal");
        current_.kind = TokenKind::String;
        current_.text = std::string(text_.substr(start, pos_ - start));
        ++pos_;
        return;
      }
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      current_.kind = TokenKind::Integer;
      current_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      current_.kind = TokenKind::Ident;
      current_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    fail_at(pos_, std::string("unexpected character '") + c + "'");
  }

  std::string read_attr_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '-' || text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) fail_at(start, "expected an attribute name after '@'");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{TokenKind::End, "", 0};
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : source_(text), lexer_(text) {}

  ConditionSet parse_set() {
    ConditionSet set;
    if (lexer_.peek().kind == TokenKind::Integer) {
      while (lexer_.peek().kind == TokenKind::Integer) {
        Token number = lexer_.take();
        int value = std::atoi(number.text.c_str());
        int expected = static_cast<int>(set.clauses.size()) + 1;
        if (value != expected) {
          lexer_.fail_at(number.offset,
                         "clause numbers must run 1..n (expected " +
                             std::to_string(expected) + ", got " + number.text + ")");
        }
        expect(TokenKind::Dot, "expected '.' after the clause number");
        set.clauses.push_back(parse_clause());
      }
    } else {
      set.clauses.push_back(parse_clause());
    }
    // Some condition tables typeset a sentence-final period; tolerate it.
    if (lexer_.peek().kind == TokenKind::Dot) lexer_.take();
    if (lexer_.peek().kind != TokenKind::End) {
      lexer_.fail("unexpected trailing input after the condition set");
    }
    return set;
  }

 private:
  Token expect(TokenKind kind, const std::string& what) {
    if (lexer_.peek().kind != kind) lexer_.fail(what);
    return lexer_.take();
  }

  bool peek_keyword(std::string_view word) const {
    return lexer_.peek().kind == TokenKind::Ident && lexer_.peek().text == word;
  }

  Clause parse_clause() {
    Clause clause;
    std::size_t start = lexer_.peek().offset;
    clause.selectors.push_back(parse_selector());
    while (peek_keyword("and")) {
      lexer_.take();
      clause.selectors.push_back(parse_selector());
    }
    std::size_t end = lexer_.peek().offset;
    clause.source_text = std::string(source_.substr(start, end - start));
    while (!clause.source_text.empty() &&
           std::isspace(static_cast<unsigned char>(clause.source_text.back()))) {
      clause.source_text.pop_back();
    }
    return clause;
  }

  Selector parse_selector() {
    expect(TokenKind::SelectorHead, "expected a selector ('//*')");
    expect(TokenKind::LBracket, "expected '[' after '//*'");
    Selector selector{parse_or()};
    expect(TokenKind::RBracket, "expected ']' to close the selector");
    return selector;
  }

  PredPtr parse_or() {
    PredPtr lhs = parse_and();
    while (peek_keyword("or")) {
      lexer_.take();
      lhs = make_or(std::move(lhs), parse_and());
    }
    return lhs;
  }

  PredPtr parse_and() {
    PredPtr lhs = parse_atom();
    while (peek_keyword("and")) {
      // "and" also joins selectors; inside a predicate we are within
      // brackets, so it always means conjunction here.
      lexer_.take();
      lhs = make_and(std::move(lhs), parse_atom());
    }
    return lhs;
  }

  AttrRef parse_attr_ref() {
    const Token& t = lexer_.peek();
    if (t.kind != TokenKind::SelfAttr && t.kind != TokenKind::ParentAttr) {
      lexer_.fail("expected an attribute reference ('@name' or '../@name')");
    }
    Token token = lexer_.take();
    auto attribute = parse_ui_attribute(token.text);
    if (!attribute) {
      lexer_.fail_at(token.offset, "unknown attribute '" + token.text + "'",
                     ErrorCode::UnknownAttribute);
    }
    Axis axis = token.kind == TokenKind::SelfAttr ? Axis::Self : Axis::Parent;
    return AttrRef{axis, *attribute};
  }

  PredPtr parse_atom() {
    const Token& t = lexer_.peek();
    switch (t.kind) {
      case TokenKind::LParen: {
        lexer_.take();
        PredPtr inner = parse_or();
        expect(TokenKind::RParen, "expected ')'");
        return inner;
      }
      case TokenKind::SelfAttr:
      case TokenKind::ParentAttr: {
        AttrRef ref = parse_attr_ref();
        expect(TokenKind::Equals, "expected '=' after the attribute reference");
        Token literal = expect(TokenKind::String, "expected a string literal");
        return make_equals(ref, literal.text);
      }
      case TokenKind::Ident: {
        Token name = lexer_.take();
        if (name.text == "contains") {
          expect(TokenKind::LParen, "expected '(' after contains");
          AttrRef ref = parse_attr_ref();
          expect(TokenKind::Comma, "expected ',' in contains(...)");
          Token literal = expect(TokenKind::String, "expected a string literal");
          expect(TokenKind::RParen, "expected ')' to close contains(...)");
          return make_contains(ref, literal.text);
        }
        if (name.text == "bbox_contains_point") {
          expect(TokenKind::LParen, "expected '(' after bbox_contains_point");
          Token refToken = lexer_.peek();
          AttrRef ref = parse_attr_ref();
          if (ref.name != UiAttribute::Bounds) {
            lexer_.fail_at(refToken.offset,
                           "bbox_contains_point takes @bounds or ../@bounds");
          }
          expect(TokenKind::Comma, "expected ',' in bbox_contains_point(...)");
          expect(TokenKind::PointVar, "expected $point");
          expect(TokenKind::RParen, "expected ')' to close bbox_contains_point(...)");
          return make_bbox_contains_point(ref.axis);
        }
        lexer_.fail_at(name.offset, "unknown function '" + name.text + "'",
                       ErrorCode::UnknownFunction);
      }
      default:
        lexer_.fail("expected a predicate");
    }
  }

  std::string_view source_;
  Lexer lexer_;
};

// ---------------------------------------------------------------------------
// Printer

std::string quote_literal(const std::string& value) {
  bool has_double = value.find('"') != std::string::npos;
  bool has_single = value.find('\'') != std::string::npos;
  if (has_double && has_single) {
    throw Error(ErrorCode::ConfigError,
                "string literal mixes both quote characters: " + value);
  }
  char quote = has_double ? '\'' : '"';
  return quote + value + quote;
}

std::string ref_string(const AttrRef& ref) {
  std::string out = ref.axis == Axis::Parent ? "../@" : "@";
  out += to_string(ref.name);
  return out;
}

int precedence(Pred::Kind kind) {
  switch (kind) {
    case Pred::Kind::Or: return 1;
    case Pred::Kind::And: return 2;
    default: return 3;
  }
}

void print_pred(const Pred& pred, int parent_prec, bool right_child,
                std::string& out) {
  int prec = precedence(pred.kind);
  bool parens = prec < parent_prec || (prec == parent_prec && right_child &&
                                       prec != 3);
  if (parens) out.push_back('(');
  switch (pred.kind) {
    case Pred::Kind::And:
      print_pred(*pred.lhs, prec, false, out);
      out += " and ";
      print_pred(*pred.rhs, prec, true, out);
      break;
    case Pred::Kind::Or:
      print_pred(*pred.lhs, prec, false, out);
      out += " or ";
      print_pred(*pred.rhs, prec, true, out);
      break;
    case Pred::Kind::Equals:
      out += ref_string(pred.ref);
      out.push_back('=');
      out += quote_literal(pred.literal);
      break;
    case Pred::Kind::Contains:
      out += "contains(";
      out += ref_string(pred.ref);
      out += ", ";
      out += quote_literal(pred.literal);
      out.push_back(')');
      break;
    case Pred::Kind::BboxContainsPoint:
      out += "bbox_contains_point(";
      out += ref_string(pred.ref);
      out += ", $point)";
      break;
  }
  if (parens) out.push_back(')');
}

}  // namespace

ConditionSet parse_condition_set(std::string_view text) {
  return Parser(text).parse_set();
}

std::string pretty_print(const Pred& pred) {
  std::string out;
  print_pred(pred, 0, false, out);
  return out;
}

std::string pretty_print(const Clause& clause) {
  std::string out;
  for (std::size_t i = 0; i < clause.selectors.size(); ++i) {
    if (i > 0) out += " and ";
    out += "//*[";
    out += pretty_print(*clause.selectors[i].predicate);
    out.push_back(']');
  }
  return out;
}

std::string pretty_print(const ConditionSet& set) {
  if (set.clauses.size() == 1) return pretty_print(set.clauses[0]);
  std::string out;
  for (std::size_t i = 0; i < set.clauses.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += std::to_string(i + 1);
    out.push_back('.');
    out += pretty_print(set.clauses[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

const UiNode* resolve_node(const UiNode& node, Axis axis) {
  return axis == Axis::Self ? &node : node.parent;
}

bool eval_pred(const Pred& pred, const UiNode& node,
               const std::optional<Point>& point) {
  switch (pred.kind) {
    case Pred::Kind::And:
      return eval_pred(*pred.lhs, node, point) &&
             eval_pred(*pred.rhs, node, point);
    case Pred::Kind::Or:
      return eval_pred(*pred.lhs, node, point) ||
             eval_pred(*pred.rhs, node, point);
    case Pred::Kind::Equals: {
      const UiNode* target = resolve_node(node, pred.ref.axis);
      if (!target) return false;
      return attribute_string(*target, pred.ref.name) == pred.literal;
    }
    case Pred::Kind::Contains: {
      const UiNode* target = resolve_node(node, pred.ref.axis);
      if (!target) return false;
      return attribute_string(*target, pred.ref.name).find(pred.literal) !=
             std::string::npos;
    }
    case Pred::Kind::BboxContainsPoint: {
      if (!point) return false;
      const UiNode* target = resolve_node(node, pred.ref.axis);
      if (!target || !target->bounds) return false;
      return bounds_contains(*target->bounds, *point);
    }
  }
  return false;
}

}  // namespace

std::optional<NodeMatch> eval_selector(const Selector& selector,
                                       const UiTree& tree,
                                       const std::optional<Point>& point) {
  const auto& nodes = tree.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (eval_pred(*selector.predicate, *nodes[i], point)) {
      return NodeMatch{nodes[i], static_cast<int>(i)};
    }
  }
  return std::nullopt;
}

ClauseResult eval_clause(const Clause& clause, const UiTree& tree,
                         const std::optional<Point>& point) {
  ClauseResult result;
  result.matched = true;
  result.per_selector.reserve(clause.selectors.size());
  for (const Selector& selector : clause.selectors) {
    bool hit = eval_selector(selector, tree, point).has_value();
    result.per_selector.push_back(hit);
    result.matched = result.matched && hit;
  }
  return result;
}

}  // namespace trajeval
