/*
Copyright 2026 The rosie Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rosie/pattern.hpp"

namespace rosie {

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t pos, std::string expected);
  std::size_t position() const { return pos_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t pos_;
  std::string expected_;
};

class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(std::string feature);
  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

enum class CompareOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge, Regex };

const char* compare_op_text(CompareOp op);

/// Atomic constraint `?var op constant` or `regex(?var, pattern, flags)`.
/// `operand` is an N-Triples constant for comparisons and the raw pattern for
/// regex.
struct FilterExpr {
  std::string var;
  CompareOp op = CompareOp::Eq;
  std::string operand;
  std::string flags;

  bool operator==(const FilterExpr&) const = default;
};

/// Binary algebra tree over the query's patterns and filters, stored as an
/// arena. `group` numbers the `{}` block a node was built in (textual order);
/// `bgp` marks And nodes folding a run of adjacent triple patterns.
struct SemanticsTree {
  enum class Kind : std::uint8_t { Pattern, And, Or, Opt, Filter };

  struct Node {
    Kind kind = Kind::Pattern;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t index = 0;  // pattern or filter index
    std::uint32_t group = 0;
    bool bgp = false;

    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;
  std::int32_t root = -1;

  const Node& at(std::int32_t i) const { return nodes.at(static_cast<std::size_t>(i)); }
  bool operator==(const SemanticsTree&) const = default;
};

struct OrderKey {
  std::string var;
  bool descending = false;
  bool operator==(const OrderKey&) const = default;
};

struct Modifiers {
  bool distinct = false;
  std::vector<OrderKey> order_by;
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> offset;
  bool operator==(const Modifiers&) const = default;
};

struct VarOccurrence {
  std::uint32_t tp = 0;  // pattern index
  Role role = Role::S;
  bool operator==(const VarOccurrence&) const = default;
};

struct Query {
  std::vector<TriplePattern> patterns;  // T1..Tn in textual order
  std::vector<FilterExpr> filters;      // C1..Cm in textual order
  SemanticsTree semantics;
  std::vector<std::string> projection;
  bool select_all = false;
  Modifiers modifiers;
  /// Every variable in order of first textual occurrence; the position is the
  /// variable id.
  std::vector<std::string> variables;

  int variable_id(std::string_view name) const;
};

Query parse_query(std::string_view text);

/// Variable -> occurrences ordered by (tp, role); variables in id order.
std::vector<std::pair<std::string, std::vector<VarOccurrence>>> variable_correlations(const Query& q);

/// Canonical SPARQL text that parses back to a structurally identical query.
std::string to_sparql(const Query& q);

/// True when both queries have the same patterns, filters, tree shape,
/// projection and modifiers.
bool structurally_equal(const Query& a, const Query& b);

std::string pattern_label(std::uint32_t tp);  // "T1" for index 0

}  // namespace rosie
