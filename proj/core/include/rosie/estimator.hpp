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

#include <array>
#include <optional>
#include <span>

#include "rosie/query.hpp"
#include "rosie/store.hpp"

namespace rosie {

class DegenerateCard : public Error {
 public:
  using Error::Error;
};

class ZeroEstimate : public Error {
 public:
  using Error::Error;
};

struct CardinalityInterval {
  double lo = 0;
  double hi = 0;
  bool operator==(const CardinalityInterval&) const = default;
};

/// Role of the shared variable on the left operand, then on the right one.
enum class JoinType : std::uint8_t { SS, SP, SO, PS, PP, PO, OS, OP, OO, None };

JoinType classify_join(Role left, Role right);
const char* join_type_name(JoinType jt);
/// SS, PP and OO joins.
bool same_position(JoinType jt);

/// Histogram counts for the bound positions of one pattern.
struct PatternStats {
  std::uint64_t dataset_size = 0;
  std::array<std::optional<std::uint64_t>, 3> bound;  // nullopt: variable position
  bool present = false;        // fully bound pattern found in the data
  bool repeated_var = false;   // some variable occupies two positions
};

PatternStats pattern_stats(const Dataset& d, const TriplePattern& tp);

/// Independence estimate |D| * prod(count / |D|) over bound positions.
double estimate_tp(const PatternStats& ps);
double estimate_tp(const TriplePattern& tp, const Dataset& d);

/// ci * cj / max(ci, cj, 1); a plain product for JoinType::None.
double estimate_join(double ci, double cj, JoinType jt);

CardinalityInterval tp_bounds(const PatternStats& ps);
CardinalityInterval tp_bounds(const TriplePattern& tp, const Dataset& d);

/// Selectivity interval of a join between operands of cardinality ci and cj.
/// Throws DegenerateCard when either cardinality is below 1.
CardinalityInterval join_selectivity_bounds(JoinType jt, double ci, double cj);

/// One operand of a left-deep chain. `partner` is the index of the earlier
/// operand the join is classified against; -1 means the previous one.
struct ChainStep {
  CardinalityInterval card;
  JoinType join = JoinType::None;
  int partner = -1;
};

/// Bounds of a left-deep chain: products of operand bounds and join
/// selectivity bounds (hi cardinalities for the upper product, lo for the
/// lower). lo is clamped to 1 unless some operand is empty.
CardinalityInterval cs_bounds(std::span<const ChainStep> steps);

struct ErrorEstimate {
  double lo = 1;
  double hi = 1;
};

enum class ErrorOp : std::uint8_t { And, Opt, Or, Filter };

/// Error of a composed expression. And/Opt: interval product of both sides
/// and the selectivity error. Or: endpoint-wise max of the sides. Filter: the
/// constraint's own error (`sel`), whatever the child.
ErrorEstimate propagate_error(ErrorOp op, const ErrorEstimate& j, const ErrorEstimate& k,
                              const ErrorEstimate& sel);

/// real / est; 1 when both are 0. Throws ZeroEstimate when only est is 0.
double error_ratio(double real, double est);

/// max(lo, sigma * hi).
double adjusted_hi(const CardinalityInterval& b, double sigma);

struct ErrorCheck {
  double hi_adj_cur = 0, hi_adj_alt = 0;
  double eps_cur = 0, eps_alt = 0;
  bool holds = false;  // eps_cur <= eps_alt
};

/// Compares the adjusted error of the current candidate sequence against an
/// alternative one. Estimates below 1 count as 1.
ErrorCheck check_error_condition(const CardinalityInterval& cur, double est_cur,
                                 const CardinalityInterval& alt, double est_alt, double sigma);

inline constexpr double kDefaultSigma = 0.05;
inline constexpr double kDefaultTau = 8.0;
inline constexpr ErrorEstimate kFilterError{0.5, 2.0};

double filter_selectivity(CompareOp op);

}  // namespace rosie
