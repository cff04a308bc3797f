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

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rosie/query.hpp"
#include "rosie/store.hpp"

namespace rosie {

class InvalidCollapse : public Error {
 public:
  using Error::Error;
};

class NoAncestor : public Error {
 public:
  using Error::Error;
};

/// A triple pattern of the query or a materialized intermediate.
struct LeafRef {
  enum class Kind : std::uint8_t { Pattern, Materialized };
  Kind kind = Kind::Pattern;
  std::uint32_t index = 0;

  static LeafRef pattern(std::uint32_t i) { return {Kind::Pattern, i}; }
  static LeafRef materialized(std::uint32_t i) { return {Kind::Materialized, i}; }
  auto operator<=>(const LeafRef&) const = default;
};

/// N-ary logical tree the planner works on. Adjacent And nodes of one
/// basic graph pattern are merged, as are Or chains. `filters` holds
/// constraints scoped to the node's result. `id` is filled in by build_qrg.
struct PlanNode {
  enum class Kind : std::uint8_t { Leaf, And, Or, Opt };

  Kind kind = Kind::Leaf;
  LeafRef leaf;
  std::vector<PlanNode> children;
  std::vector<std::uint32_t> filters;
  std::int32_t id = -1;

  bool is_leaf() const { return kind == Kind::Leaf; }
};

struct MaterializedInfo {
  RelationId relation;
  double cardinality = 0;
  std::vector<std::string> schema;
  std::vector<std::string> certain;                 // bound in every row
  std::vector<std::pair<std::string, Role>> roles;  // first-occurrence role
  std::vector<std::uint32_t> patterns;              // covered pattern indices
};

/// Query being evaluated: the original query plus the current logical tree,
/// where already evaluated parts have been replaced by materialized leaves.
struct QueryState {
  std::shared_ptr<const Query> query;
  PlanNode root;
  std::vector<double> weights;  // per pattern
  std::vector<MaterializedInfo> materialized;
};

/// Builds the initial state with independence-estimate weights.
QueryState make_state(std::shared_ptr<const Query> q, const Dataset& d);
QueryState make_state(std::shared_ptr<const Query> q, std::vector<double> weights);

std::string leaf_label(LeafRef leaf);  // T3, M1

enum class OpKind : std::uint8_t { And, Or, Opt, Filter };
const char* op_kind_name(OpKind k);

struct OperatorVertex {
  std::uint32_t id = 0;
  OpKind kind = OpKind::And;
  std::int32_t parent = -1;
  std::uint32_t depth = 0;
  int side = -1;  // 0 left / 1 right when the parent is an Opt
  std::vector<std::uint32_t> children;  // operator ids
  std::vector<std::uint32_t> members;   // pattern vertex ids (the region)
  std::uint32_t filter = 0;             // for OpKind::Filter
};

struct PatternVertex {
  std::uint32_t id = 0;
  LeafRef leaf;
  double weight = 0;
  std::uint32_t op = 0;  // enclosing operator
  int side = -1;         // 0 left / 1 right when the operator is an Opt
  std::vector<std::pair<std::string, Role>> vars;  // linked variables with labels
};

struct VariableVertex {
  std::string name;
  std::vector<std::pair<std::uint32_t, Role>> patterns;  // E2 edges
  std::vector<std::uint32_t> filters;                    // filter operator ids
};

/// Query relation graph: operator, pattern and variable vertices.
class Qrg {
 public:
  const QueryState& state() const { return state_; }
  const Query& query() const { return *state_.query; }

  const std::vector<OperatorVertex>& operators() const { return ops_; }
  const std::vector<PatternVertex>& patterns() const { return tps_; }
  const std::vector<VariableVertex>& variables() const { return vars_; }

  const OperatorVertex& op(std::uint32_t id) const { return ops_.at(id); }
  const PatternVertex& pattern(std::uint32_t id) const { return tps_.at(id); }
  std::uint32_t root() const { return 0; }

  /// Pattern vertex of a leaf, or -1.
  int vertex_of(LeafRef leaf) const;
  const VariableVertex* variable(std::string_view name) const;

  /// Pattern vertices anywhere below the operator.
  std::vector<std::uint32_t> subtree_patterns(std::uint32_t op) const;
  /// Operator ids from `op` up to the root, inclusive.
  std::vector<std::uint32_t> path_to_root(std::uint32_t op) const;

  void set_weight(std::uint32_t vertex, double w);

 private:
  friend Qrg build_qrg(QueryState state);

  QueryState state_;
  std::vector<OperatorVertex> ops_;
  std::vector<PatternVertex> tps_;
  std::vector<VariableVertex> vars_;
};

Qrg build_qrg(QueryState state);
Qrg build_qrg(const Query& q, const Dataset& d);

/// Pattern vertices directly enclosed by the operator.
std::vector<std::uint32_t> region_of(const Qrg& g, std::uint32_t op);

/// Every operator vertex above a pattern or filter linked to `var`.
std::vector<std::uint32_t> ancestors(const Qrg& g, std::string_view var);

/// Member of ancestors(var) with the least summed tree distance to the
/// patterns and filters linked to `var`.
std::uint32_t lca(const Qrg& g, std::string_view var);

/// True when every pattern of `region` linked to `var` is arranged.
bool is_available(const Qrg& g, std::string_view var, std::uint32_t region_op,
                  const std::set<std::uint32_t>& arranged);

/// Replaces the arranged leaves with one materialized leaf and rebuilds the
/// graph. `consumed_filters` are constraints already applied inside the
/// materialized result.
Qrg collapse_materialized(const Qrg& g, const std::set<std::uint32_t>& arranged, MaterializedInfo info,
                          const std::set<std::uint32_t>& consumed_filters = {});

/// Same operation on a state, without rebuilding a graph.
QueryState collapse_state(const QueryState& s, const std::set<LeafRef>& leaves, MaterializedInfo info,
                          const std::set<std::uint32_t>& consumed_filters);

/// Variables bound in every solution of the subtree.
std::set<std::string> certain_variables(const QueryState& s, const PlanNode& n);
/// Every variable the subtree can bind.
std::set<std::string> all_variables(const QueryState& s, const PlanNode& n);
/// Leaves in the subtree.
std::set<LeafRef> leaves_of(const PlanNode& n);
/// Variables and first-occurrence labels of a leaf.
std::vector<std::pair<std::string, Role>> leaf_variables(const QueryState& s, LeafRef leaf);

/// Children of an And node with nested Ands inlined, unless a nested And
/// carries a filter over a variable it does not always bind.
std::vector<const PlanNode*> and_chain(const QueryState& s, const PlanNode& n);
/// Filters pooled by and_chain from inlined children, plus the node's own.
std::vector<std::uint32_t> and_chain_filters(const QueryState& s, const PlanNode& n);
/// Branches of an Or node with filter-free nested Ors inlined.
std::vector<const PlanNode*> or_chain(const PlanNode& n);

std::string to_dot(const Qrg& g);

}  // namespace rosie
