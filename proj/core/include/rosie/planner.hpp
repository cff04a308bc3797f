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

#include <string>
#include <vector>

#include "rosie/qrg.hpp"

namespace rosie {

class PlanningStuck : public Error {
 public:
  using Error::Error;
};

class NotExchangeable : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Candidate sequence: a binary operator tree over leaves. And, Or and Opt
/// nodes have two children, Filter nodes one.
struct CsNode {
  enum class Kind : std::uint8_t { Leaf, And, Or, Opt, Filter };

  Kind kind = Kind::Leaf;
  LeafRef leaf;
  std::uint32_t filter = 0;
  std::vector<CsNode> children;

  static CsNode make_leaf(LeafRef l);
  static CsNode binary(Kind k, CsNode left, CsNode right);
  static CsNode filtered(CsNode child, std::uint32_t filter);

  bool is_leaf() const { return kind == Kind::Leaf; }
  bool operator==(const CsNode&) const = default;
};

using CandidateSequence = CsNode;

/// Variable label sets of a pattern vertex, in rank order.
enum class IncidenceClass : std::uint8_t { None, P, S, O, SP, PO, SO, SPO };

IncidenceClass incidence_class(const Qrg& g, std::uint32_t vertex);
const char* incidence_class_name(IncidenceClass c);

/// Candidates sorted by (incidence class, weight, leaf order).
std::vector<std::uint32_t> h1_rank(const Qrg& g, std::vector<std::uint32_t> candidates);

struct Plan {
  CandidateSequence cs;
  std::vector<LeafRef> order;  // arrangement order, equal to cs_leaves(cs)
};

Plan plan_cs(const Qrg& g);

/// Leaves left to right.
std::vector<LeafRef> cs_leaves(const CsNode& cs);
/// Filter indices used anywhere in the tree.
std::vector<std::uint32_t> cs_filters(const CsNode& cs);

/// Text form such as `((T1 And T2) Filter C) Opt T3`.
std::string to_string(const CsNode& cs, const Query& q);

/// Swaps leaves i and j (left-to-right positions) of the subtree at `path`
/// (child indices from the root). The subtree must use a single And or Or
/// operator.
CsNode rewrite_exchange(const CsNode& cs, const std::vector<int>& path, std::size_t i, std::size_t j);

/// Distribution rules applied at `path`:
///   1: (X And (Y Or Z))    -> ((X And Z) Or (X And Y))
///   2: (X Opt (Y Or Z))    -> ((X Opt Z) Or (X Opt Y))
///   3: ((X Or Y) Opt Z)    -> ((X Opt Z) Or (Y Opt Z))
///   4: ((X Or Y) Filter C) -> ((X Filter C) Or (Y Filter C))
CsNode rewrite_distribute(const CsNode& cs, int rule, const std::vector<int>& path);

const CsNode& node_at(const CsNode& cs, const std::vector<int>& path);

}  // namespace rosie
