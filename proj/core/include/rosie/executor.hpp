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

#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rosie/planner.hpp"

namespace rosie {

class Timeout : public Error {
 public:
  explicit Timeout(std::chrono::milliseconds budget);
  std::chrono::milliseconds budget() const { return budget_; }

 private:
  std::chrono::milliseconds budget_;
};

/// Optional wall-clock limit shared by every operator of one query.
class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget);
  void check() const;
  bool active() const { return at_.has_value(); }

 private:
  std::optional<std::chrono::steady_clock::time_point> at_;
  std::chrono::milliseconds budget_{0};
};

/// Physical operator tree.
struct PhysicalOp {
  enum class Kind : std::uint8_t {
    Scan, Fetch, HashJoin, LeftOuterJoin, Union, Filter, Project, Distinct, Sort, Slice
  };

  Kind kind = Kind::Scan;
  std::vector<std::string> schema;
  std::vector<std::string> certain;  // bound in every output row
  double estimate = 0;
  std::vector<PhysicalOp> children;

  TriplePattern pattern;            // Scan
  RelationId relation;              // Fetch
  FilterExpr filter;                // Filter
  bool build_left = false;          // HashJoin: hash the left input
  std::vector<OrderKey> order;      // Sort
  std::uint64_t offset = 0;         // Slice
  std::optional<std::uint64_t> limit;
};

using PhysicalPlan = PhysicalOp;

const char* physical_kind_name(PhysicalOp::Kind k);

/// Lowers a candidate sequence. Materialized leaves read intermediates
/// registered under the state's relation ids.
PhysicalPlan compile(const CsNode& cs, const QueryState& s, const Dataset& d);

/// Adds projection, DISTINCT, ORDER BY and LIMIT/OFFSET on top.
PhysicalPlan with_modifiers(PhysicalPlan p, const Query& q);

Relation execute(const PhysicalPlan& p, const Dataset& d, const Deadline& deadline = {});

/// Constraint test on one term; unbound values fail.
bool eval_filter(const FilterExpr& f, std::optional<std::string_view> term);

/// Numeric when both lexical forms parse as numbers, else codepoint order of
/// the lexical forms. Unbound sorts first.
int compare_terms(std::optional<std::string_view> a, std::optional<std::string_view> b);

/// Header of `?var` names, then one row per line; unbound cells are empty.
void write_tsv(const Relation& r, const Dataset& d, std::ostream& out);

}  // namespace rosie
