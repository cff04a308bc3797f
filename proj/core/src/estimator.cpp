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
#include "rosie/estimator.hpp"

#include <algorithm>
#include <vector>

namespace rosie {

JoinType classify_join(Role left, Role right) {
  return static_cast<JoinType>(static_cast<int>(left) * 3 + static_cast<int>(right));
}

const char* join_type_name(JoinType jt) {
  static constexpr const char* kNames[] = {"SS", "SP", "SO", "PS", "PP", "PO", "OS", "OP", "OO", "NONE"};
  return kNames[static_cast<int>(jt)];
}

bool same_position(JoinType jt) { return jt == JoinType::SS || jt == JoinType::PP || jt == JoinType::OO; }

PatternStats pattern_stats(const Dataset& d, const TriplePattern& tp) {
  PatternStats ps;
  ps.dataset_size = d.size();
  Triple t;
  bool all_known = true;
  for (Role r : kRoles) {
    const PatternTerm& term = tp.at(r);
    if (term.is_var()) continue;
    auto id = d.lookup(term.text);
    ps.bound[static_cast<int>(r)] = id ? stats_lookup(d, *id, r) : 0;
    if (id) {
      (r == Role::S ? t.s : r == Role::P ? t.p : t.o) = *id;
    } else {
      all_known = false;
    }
  }
  auto vars = tp.variables();
  int var_positions = 0;
  for (Role r : kRoles) var_positions += tp.at(r).is_var();
  ps.repeated_var = var_positions > static_cast<int>(vars.size());
  ps.present = var_positions == 0 && all_known && d.contains(t);
  return ps;
}

double estimate_tp(const PatternStats& ps) {
  if (ps.dataset_size == 0) return 0;
  const double n = static_cast<double>(ps.dataset_size);
  double est = n;
  for (const auto& b : ps.bound)
    if (b) est *= static_cast<double>(*b) / n;
  return est;
}

double estimate_tp(const TriplePattern& tp, const Dataset& d) { return estimate_tp(pattern_stats(d, tp)); }

double estimate_join(double ci, double cj, JoinType jt) {
  if (jt == JoinType::None) return ci * cj;
  return ci * cj / std::max({ci, cj, 1.0});
}

CardinalityInterval tp_bounds(const PatternStats& ps) {
  std::vector<double> counts;
  for (const auto& b : ps.bound)
    if (b) {
      if (*b == 0) return {0, 0};
      counts.push_back(static_cast<double>(*b));
    }
  const double n = static_cast<double>(ps.dataset_size);
  if (n == 0) return {0, 0};
  switch (counts.size()) {
    case 0:
      return ps.repeated_var ? CardinalityInterval{1, n} : CardinalityInterval{n, n};
    case 1:
      // One bound position: the histogram entry is exact unless a variable
      // repeats, in which case it only caps the result.
      if (ps.repeated_var) return {1, counts[0]};
      return {counts[0], counts[0]};
    case 2: {
      double lo = std::max(1.0, counts[0] * counts[1] / n);
      double hi = std::min(counts[0], counts[1]);
      return {std::min(lo, hi), hi};
    }
    default:
      return ps.present ? CardinalityInterval{1, 1} : CardinalityInterval{0, 0};
  }
}

CardinalityInterval tp_bounds(const TriplePattern& tp, const Dataset& d) { return tp_bounds(pattern_stats(d, tp)); }

CardinalityInterval join_selectivity_bounds(JoinType jt, double ci, double cj) {
  if (jt == JoinType::None) return {1, 1};
  if (ci < 1 || cj < 1) throw DegenerateCard("join operand cardinality below 1");
  const double lo = 1.0 / (ci * cj);
  return {lo, same_position(jt) ? 1.0 / std::max(ci, cj) : 1.0};
}

CardinalityInterval cs_bounds(std::span<const ChainStep> steps) {
  if (steps.empty()) return {0, 0};
  double lo = 1, hi = 1;
  bool empty = false;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const ChainStep& st = steps[k];
    if (st.card.hi <= 0) empty = true;
    lo *= st.card.lo;
    hi *= st.card.hi;
    if (k == 0 || st.join == JoinType::None) continue;
    std::size_t p = st.partner < 0 ? k - 1 : static_cast<std::size_t>(st.partner);
    const ChainStep& other = steps[p];
    if (empty) continue;
    auto sel_hi = join_selectivity_bounds(st.join, std::max(1.0, other.card.hi), std::max(1.0, st.card.hi));
    auto sel_lo = join_selectivity_bounds(st.join, std::max(1.0, other.card.lo), std::max(1.0, st.card.lo));
    hi *= sel_hi.hi;
    lo *= sel_lo.lo;
  }
  if (empty) return {0, 0};
  return {std::max(1.0, lo), hi};
}

ErrorEstimate propagate_error(ErrorOp op, const ErrorEstimate& j, const ErrorEstimate& k,
                              const ErrorEstimate& sel) {
  switch (op) {
    case ErrorOp::And:
    case ErrorOp::Opt:
      return {j.lo * k.lo * sel.lo, j.hi * k.hi * sel.hi};
    case ErrorOp::Or:
      return {std::max(j.lo, k.lo), std::max(j.hi, k.hi)};
    case ErrorOp::Filter:
      return sel;
  }
  return {};
}

double error_ratio(double real, double est) {
  if (est <= 0) {
    if (real <= 0) return 1.0;
    throw ZeroEstimate("estimate is 0 for a non-empty result");
  }
  return real / est;
}

double adjusted_hi(const CardinalityInterval& b, double sigma) { return std::max(b.lo, sigma * b.hi); }

ErrorCheck check_error_condition(const CardinalityInterval& cur, double est_cur,
                                 const CardinalityInterval& alt, double est_alt, double sigma) {
  ErrorCheck c;
  c.hi_adj_cur = adjusted_hi(cur, sigma);
  c.hi_adj_alt = adjusted_hi(alt, sigma);
  c.eps_cur = c.hi_adj_cur / std::max(1.0, est_cur);
  c.eps_alt = c.hi_adj_alt / std::max(1.0, est_alt);
  c.holds = c.eps_cur <= c.eps_alt;
  return c;
}

double filter_selectivity(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return 0.1;
    case CompareOp::Regex: return 0.25;
    case CompareOp::Ne: return 0.9;
    default: return 1.0 / 3.0;
  }
}

}  // namespace rosie
