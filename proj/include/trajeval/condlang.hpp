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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajeval/geometry.hpp"
#include "trajeval/uitree.hpp"

namespace trajeval {

// The XPath-like task-success-condition language.
//
//   set       := numbered_clause+ | clause
//   numbered  := INT '.' clause          (numbers must run 1..n)
//   clause    := selector ('and' selector)*
//   selector  := '//*' '[' pred ']'
//   pred      := or_expr
//   or_expr   := and_expr ('or' and_expr)*
//   and_expr  := atom ('and' atom)*
//   atom      := '(' pred ')'
//              | attr_ref '=' STRING
//              | 'contains' '(' attr_ref ',' STRING ')'
//              | 'bbox_contains_point' '(' bounds_ref ',' '$point' ')'
//   attr_ref  := '@' NAME | '../@' NAME  (NAME one of the eight dump attrs)
//
// String literals take single or double quotes; the printer emits double.
// There is no negation and no positional predicate. A clause's selectors
// are a same-step conjunction; numbered clauses are matched in order at
// strictly increasing steps (see evalengine).

enum class Axis { Self, Parent };

struct AttrRef {
  Axis axis = Axis::Self;
  UiAttribute name = UiAttribute::Text;

  friend bool operator==(const AttrRef&, const AttrRef&) = default;
};

struct Pred {
  enum class Kind { And, Or, Equals, Contains, BboxContainsPoint };

  Kind kind = Kind::Equals;
  // And/Or:
  std::shared_ptr<const Pred> lhs;
  std::shared_ptr<const Pred> rhs;
  // Equals/Contains: ref + literal. BboxContainsPoint: ref (name == Bounds).
  AttrRef ref;
  std::string literal;
};

using PredPtr = std::shared_ptr<const Pred>;

PredPtr make_and(PredPtr lhs, PredPtr rhs);
PredPtr make_or(PredPtr lhs, PredPtr rhs);
PredPtr make_equals(AttrRef ref, std::string literal);
PredPtr make_contains(AttrRef ref, std::string literal);
PredPtr make_bbox_contains_point(Axis axis);

bool pred_equal(const Pred& a, const Pred& b);

/// One "//*[pred]" existential test over the nodes of a single step's tree.
struct Selector {
  PredPtr predicate;
};

/// Selectors joined by top-level "and": all must hold on one page state.
struct Clause {
  std::vector<Selector> selectors;
  std::string source_text;  // not part of structural equality
};

/// Ordered clauses; order is the required temporal order when the source
/// was numbered. A single unnumbered clause is a set of size 1.
struct ConditionSet {
  std::vector<Clause> clauses;
};

bool structurally_equal(const Selector& a, const Selector& b);
bool structurally_equal(const Clause& a, const Clause& b);
bool structurally_equal(const ConditionSet& a, const ConditionSet& b);

/// Throws ParseError{SyntaxError} with position, Error{UnknownAttribute},
/// or Error{UnknownFunction}. Tolerates a sentence-final '.' after the last
/// clause (papered-over typography in condition tables).
ConditionSet parse_condition_set(std::string_view text);

/// Canonical text. parse(pretty_print(cs)) is structurally equal to cs.
/// Single-clause sets print unnumbered; larger sets print "1.", "2.", ...
/// joined by newlines.
std::string pretty_print(const ConditionSet& set);
std::string pretty_print(const Clause& clause);
std::string pretty_print(const Pred& pred);

struct NodeMatch {
  const UiNode* node = nullptr;
  int document_index = 0;
};

/// First node in document order whose predicate holds, if any. point is the
/// interaction point of the action taken at this step; when absent every
/// $point atom is false. Parent-axis atoms are false at the root.
/// Evaluation is total: malformed or missing bounds make the bbox atom
/// false rather than erroring.
std::optional<NodeMatch> eval_selector(const Selector& selector,
                                       const UiTree& tree,
                                       const std::optional<Point>& point);

struct ClauseResult {
  bool matched = false;
  std::vector<bool> per_selector;
};

/// All selectors against the same step's tree; they may match different
/// nodes.
ClauseResult eval_clause(const Clause& clause, const UiTree& tree,
                         const std::optional<Point>& point);

}  // namespace trajeval
