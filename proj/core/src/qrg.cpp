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
#include "rosie/qrg.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "rosie/estimator.hpp"

namespace rosie {

namespace {

using SKind = SemanticsTree::Kind;

// Operands of a chain of binary nodes of one kind and group.
void gather(const SemanticsTree& t, std::int32_t n, SKind kind, std::uint32_t group, bool bgp,
            std::vector<std::int32_t>& out) {
  const auto& node = t.at(n);
  if (node.kind == kind && node.group == group && node.bgp == bgp) {
    gather(t, node.left, kind, group, bgp, out);
    gather(t, node.right, kind, group, bgp, out);
  } else {
    out.push_back(n);
  }
}

PlanNode convert(const SemanticsTree& t, std::int32_t n) {
  const auto& node = t.at(n);
  PlanNode out;
  switch (node.kind) {
    case SKind::Pattern:
      out.leaf = LeafRef::pattern(node.index);
      return out;
    case SKind::Filter:
      out = convert(t, node.left);
      out.filters.push_back(node.index);
      return out;
    case SKind::Opt:
      out.kind = PlanNode::Kind::Opt;
      out.children.push_back(convert(t, node.left));
      out.children.push_back(convert(t, node.right));
      return out;
    case SKind::And:
    case SKind::Or: {
      out.kind = node.kind == SKind::And ? PlanNode::Kind::And : PlanNode::Kind::Or;
      std::vector<std::int32_t> operands;
      gather(t, node.left, node.kind, node.group, node.bgp, operands);
      gather(t, node.right, node.kind, node.group, node.bgp, operands);
      for (auto o : operands) out.children.push_back(convert(t, o));
      return out;
    }
  }
  return out;
}

PlanNode wrap_root(PlanNode n) {
  if (!n.is_leaf()) return n;
  PlanNode root;
  root.kind = PlanNode::Kind::And;
  root.children.push_back(std::move(n));
  return root;
}

void collect_leaves(const PlanNode& n, std::set<LeafRef>& out) {
  if (n.is_leaf()) {
    out.insert(n.leaf);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out);
}

bool includes(const std::set<LeafRef>& big, const std::set<LeafRef>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

std::string leaf_label(LeafRef leaf) {
  return (leaf.kind == LeafRef::Kind::Pattern ? "T" : "M") + std::to_string(leaf.index + 1);
}

const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::And: return "And";
    case OpKind::Or: return "Or";
    case OpKind::Opt: return "Opt";
    case OpKind::Filter: return "Filter";
  }
  return "?";
}

QueryState make_state(std::shared_ptr<const Query> q, std::vector<double> weights) {
  QueryState s;
  s.root = wrap_root(convert(q->semantics, q->semantics.root));
  s.weights = std::move(weights);
  s.weights.resize(q->patterns.size(), 0);
  s.query = std::move(q);
  return s;
}

QueryState make_state(std::shared_ptr<const Query> q, const Dataset& d) {
  std::vector<double> w;
  for (const auto& tp : q->patterns) w.push_back(estimate_tp(tp, d));
  return make_state(std::move(q), std::move(w));
}

std::set<LeafRef> leaves_of(const PlanNode& n) {
  std::set<LeafRef> out;
  collect_leaves(n, out);
  return out;
}

std::vector<std::pair<std::string, Role>> leaf_variables(const QueryState& s, LeafRef leaf) {
  if (leaf.kind == LeafRef::Kind::Materialized) return s.materialized.at(leaf.index).roles;
  std::vector<std::pair<std::string, Role>> out;
  const TriplePattern& tp = s.query->patterns.at(leaf.index);
  for (Role r : kRoles)
    if (tp.at(r).is_var()) out.emplace_back(tp.at(r).text, r);
  return out;
}

std::set<std::string> all_variables(const QueryState& s, const PlanNode& n) {
  std::set<std::string> out;
  if (n.is_leaf()) {
    if (n.leaf.kind == LeafRef::Kind::Materialized) {
      const auto& sc = s.materialized.at(n.leaf.index).schema;
      out.insert(sc.begin(), sc.end());
    } else {
      for (auto& [v, r] : leaf_variables(s, n.leaf)) out.insert(v);
    }
    return out;
  }
  for (const auto& c : n.children) {
    auto sub = all_variables(s, c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::set<std::string> certain_variables(const QueryState& s, const PlanNode& n) {
  switch (n.kind) {
    case PlanNode::Kind::Leaf:
      if (n.leaf.kind == LeafRef::Kind::Materialized) {
        const auto& c = s.materialized.at(n.leaf.index).certain;
        return {c.begin(), c.end()};
      }
      return all_variables(s, n);
    case PlanNode::Kind::And: {
      std::set<std::string> out;
      for (const auto& c : n.children) {
        auto sub = certain_variables(s, c);
        out.insert(sub.begin(), sub.end());
      }
      return out;
    }
    case PlanNode::Kind::Or: {
      std::set<std::string> out = certain_variables(s, n.children.at(0));
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        auto sub = certain_variables(s, n.children[i]);
        std::set<std::string> keep;
        std::set_intersection(out.begin(), out.end(), sub.begin(), sub.end(), std::inserter(keep, keep.end()));
        out = std::move(keep);
      }
      return out;
    }
    case PlanNode::Kind::Opt:
      return certain_variables(s, n.children.at(0));
  }
  return {};
}

namespace {

bool inlinable(const QueryState& s, const PlanNode& c) {
  if (c.kind != PlanNode::Kind::And) return false;
  if (c.filters.empty()) return true;
  auto cert = certain_variables(s, c);
  for (auto f : c.filters)
    if (!cert.count(s.query->filters.at(f).var)) return false;
  return true;
}

void chain_into(const QueryState& s, const PlanNode& n, std::vector<const PlanNode*>& out,
                std::vector<std::uint32_t>* filters) {
  for (const auto& c : n.children) {
    if (inlinable(s, c)) {
      if (filters) filters->insert(filters->end(), c.filters.begin(), c.filters.end());
      chain_into(s, c, out, filters);
    } else {
      out.push_back(&c);
    }
  }
}

void or_into(const PlanNode& n, std::vector<const PlanNode*>& out) {
  for (const auto& c : n.children) {
    if (c.kind == PlanNode::Kind::Or && c.filters.empty()) or_into(c, out);
    else out.push_back(&c);
  }
}

}  // namespace

std::vector<const PlanNode*> and_chain(const QueryState& s, const PlanNode& n) {
  std::vector<const PlanNode*> out;
  chain_into(s, n, out, nullptr);
  return out;
}

std::vector<std::uint32_t> and_chain_filters(const QueryState& s, const PlanNode& n) {
  std::vector<const PlanNode*> els;
  std::vector<std::uint32_t> filters = n.filters;
  chain_into(s, n, els, &filters);
  std::sort(filters.begin(), filters.end());
  return filters;
}

std::vector<const PlanNode*> or_chain(const PlanNode& n) {
  std::vector<const PlanNode*> out;
  or_into(n, out);
  return out;
}

// ---------------------------------------------------------------------------

int Qrg::vertex_of(LeafRef leaf) const {
  for (const auto& v : tps_)
    if (v.leaf == leaf) return static_cast<int>(v.id);
  return -1;
}

const VariableVertex* Qrg::variable(std::string_view name) const {
  for (const auto& v : vars_)
    if (v.name == name) return &v;
  return nullptr;
}

std::vector<std::uint32_t> Qrg::subtree_patterns(std::uint32_t op) const {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> stack{op};
  while (!stack.empty()) {
    auto o = stack.back();
    stack.pop_back();
    const auto& v = ops_.at(o);
    out.insert(out.end(), v.members.begin(), v.members.end());
    stack.insert(stack.end(), v.children.begin(), v.children.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> Qrg::path_to_root(std::uint32_t op) const {
  std::vector<std::uint32_t> out;
  for (std::int32_t o = static_cast<std::int32_t>(op); o >= 0; o = ops_.at(static_cast<std::size_t>(o)).parent)
    out.push_back(static_cast<std::uint32_t>(o));
  return out;
}

void Qrg::set_weight(std::uint32_t vertex, double w) { tps_.at(vertex).weight = w; }

Qrg build_qrg(QueryState state) {
  Qrg g;
  state.root = wrap_root(std::move(state.root));
  g.state_ = std::move(state);
  const QueryState& s = g.state_;

  struct PendingFilter {
    std::uint32_t filter;
    std::uint32_t parent;
  };
  std::vector<PendingFilter> pending;

  auto visit = [&](auto&& self, PlanNode& n, std::int32_t parent, std::uint32_t depth, int side) -> void {
    if (n.is_leaf()) {
      PatternVertex v;
      v.id = static_cast<std::uint32_t>(g.tps_.size());
      v.leaf = n.leaf;
      v.weight = n.leaf.kind == LeafRef::Kind::Pattern ? s.weights.at(n.leaf.index)
                                                        : s.materialized.at(n.leaf.index).cardinality;
      v.op = static_cast<std::uint32_t>(parent);
      v.side = side;
      v.vars = leaf_variables(s, n.leaf);
      n.id = static_cast<std::int32_t>(v.id);
      g.ops_.at(static_cast<std::size_t>(parent)).members.push_back(v.id);
      g.tps_.push_back(std::move(v));
      for (auto f : n.filters) pending.push_back({f, static_cast<std::uint32_t>(parent)});
      return;
    }
    OperatorVertex op;
    op.id = static_cast<std::uint32_t>(g.ops_.size());
    op.kind = n.kind == PlanNode::Kind::And ? OpKind::And : n.kind == PlanNode::Kind::Or ? OpKind::Or : OpKind::Opt;
    op.parent = parent;
    op.depth = depth;
    op.side = side;
    n.id = static_cast<std::int32_t>(op.id);
    if (parent >= 0) g.ops_.at(static_cast<std::size_t>(parent)).children.push_back(op.id);
    g.ops_.push_back(op);
    for (auto f : n.filters) pending.push_back({f, op.id});
    for (std::size_t i = 0; i < n.children.size(); ++i)
      self(self, n.children[i], static_cast<std::int32_t>(op.id), depth + 1,
           n.kind == PlanNode::Kind::Opt ? static_cast<int>(i) : -1);
  };
  visit(visit, g.state_.root, -1, 0, -1);

  for (const auto& pf : pending) {
    OperatorVertex op;
    op.id = static_cast<std::uint32_t>(g.ops_.size());
    op.kind = OpKind::Filter;
    op.parent = static_cast<std::int32_t>(pf.parent);
    op.depth = g.ops_.at(pf.parent).depth + 1;
    op.filter = pf.filter;
    g.ops_.at(pf.parent).children.push_back(op.id);
    g.ops_.push_back(op);
  }

  // Variables in query order. A materialized leaf keeps an edge only for
  // variables still needed by some other leaf or filter.
  const Query& q = *s.query;
  std::map<std::string, std::size_t> uses;
  for (const auto& v : g.tps_) {
    std::set<std::string> seen;
    for (auto& [name, r] : v.vars)
      if (seen.insert(name).second) ++uses[name];
  }
  for (const auto& op : g.ops_)
    if (op.kind == OpKind::Filter) ++uses[q.filters.at(op.filter).var];

  for (const auto& name : q.variables) {
    VariableVertex vv;
    vv.name = name;
    for (const auto& v : g.tps_) {
      if (v.leaf.kind == LeafRef::Kind::Materialized && uses[name] < 2) continue;
      for (auto& [n, r] : v.vars)
        if (n == name) vv.patterns.emplace_back(v.id, r);
    }
    for (const auto& op : g.ops_)
      if (op.kind == OpKind::Filter && q.filters.at(op.filter).var == name) vv.filters.push_back(op.id);
    if (!vv.patterns.empty() || !vv.filters.empty()) g.vars_.push_back(std::move(vv));
  }
  // Drop materialized edges the loop above skipped from the vertex view too.
  for (auto& v : g.tps_) {
    if (v.leaf.kind != LeafRef::Kind::Materialized) continue;
    std::erase_if(v.vars, [&](const auto& e) { return uses[e.first] < 2; });
  }
  return g;
}

Qrg build_qrg(const Query& q, const Dataset& d) {
  return build_qrg(make_state(std::make_shared<const Query>(q), d));
}

std::vector<std::uint32_t> region_of(const Qrg& g, std::uint32_t op) { return g.op(op).members; }

std::vector<std::uint32_t> ancestors(const Qrg& g, std::string_view var) {
  const VariableVertex* v = g.variable(var);
  if (!v) throw NoAncestor("variable ?" + std::string(var) + " has no vertex");
  std::set<std::uint32_t> out;
  for (auto& [tp, r] : v->patterns)
    for (auto o : g.path_to_root(g.pattern(tp).op)) out.insert(o);
  for (auto f : v->filters)
    for (auto o : g.path_to_root(static_cast<std::uint32_t>(g.op(f).parent))) out.insert(o);
  if (out.empty()) throw NoAncestor("variable ?" + std::string(var) + " has no ancestor");
  return {out.begin(), out.end()};
}

std::uint32_t lca(const Qrg& g, std::string_view var) {
  auto a = ancestors(g, var);
  const VariableVertex* v = g.variable(var);
  auto dist = [&](std::uint32_t x, std::uint32_t y) -> std::uint64_t {
    auto px = g.path_to_root(x), py = g.path_to_root(y);
    std::set<std::uint32_t> sy(py.begin(), py.end());
    for (auto common : px)
      if (sy.count(common)) return g.op(x).depth + g.op(y).depth - 2 * g.op(common).depth;
    return std::numeric_limits<std::uint32_t>::max();
  };
  // Summed distance to every pattern and filter linked to the variable; ties
  // go to the lowest operator id.
  std::uint32_t best = a.front();
  std::uint64_t best_sum = std::numeric_limits<std::uint64_t>::max();
  for (auto x : a) {
    std::uint64_t sum = 0;
    for (auto& [tp, role] : v->patterns) sum += dist(x, g.pattern(tp).op) + 1;
    for (auto f : v->filters) sum += dist(x, f);
    if (sum < best_sum || (sum == best_sum && x < best)) {
      best = x;
      best_sum = sum;
    }
  }
  return best;
}

bool is_available(const Qrg& g, std::string_view var, std::uint32_t region_op,
                  const std::set<std::uint32_t>& arranged) {
  for (auto m : g.op(region_op).members) {
    if (arranged.count(m)) continue;
    for (auto& [name, r] : g.pattern(m).vars)
      if (name == var) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

void drop_filters(PlanNode& n, const std::set<std::uint32_t>& consumed) {
  std::erase_if(n.filters, [&](std::uint32_t f) { return consumed.count(f) > 0; });
  for (auto& c : n.children) drop_filters(c, consumed);
}

PlanNode contract(PlanNode n) {
  if (n.is_leaf() || n.kind == PlanNode::Kind::Opt || n.children.size() != 1) return n;
  PlanNode child = std::move(n.children.front());
  child.filters.insert(child.filters.end(), n.filters.begin(), n.filters.end());
  return child;
}

// Returns true when the collapse happened somewhere below (or at) n.
bool collapse_in(const QueryState& s, PlanNode& n, const std::set<LeafRef>& target, LeafRef mleaf) {
  auto mine = leaves_of(n);
  if (!includes(mine, target)) return false;
  if (!n.is_leaf())
    for (auto& c : n.children)
      if (collapse_in(s, c, target, mleaf)) {
        n = contract(std::move(n));
        return true;
      }
  if (mine == target) {
    PlanNode leaf;
    leaf.leaf = mleaf;
    leaf.filters = n.filters;
    n = std::move(leaf);
    return true;
  }
  if (n.kind != PlanNode::Kind::And && n.kind != PlanNode::Kind::Or)
    throw InvalidCollapse("arranged set does not form a prefix of an And or Or chain");

  std::vector<const PlanNode*> els =
      n.kind == PlanNode::Kind::And ? and_chain(s, n) : or_chain(n);
  std::vector<std::uint32_t> filters = n.kind == PlanNode::Kind::And ? and_chain_filters(s, n) : n.filters;
  PlanNode out;
  out.kind = n.kind;
  PlanNode m;
  m.leaf = mleaf;
  out.children.push_back(std::move(m));
  std::set<LeafRef> covered;
  for (const PlanNode* e : els) {
    auto el = leaves_of(*e);
    bool inside = includes(target, el);
    bool disjoint = std::none_of(el.begin(), el.end(), [&](const LeafRef& l) { return target.count(l) > 0; });
    if (inside) {
      // Filters scoped to a swallowed element must already be applied.
      if (!e->filters.empty()) throw InvalidCollapse("materialized element still carries a filter");
      covered.insert(el.begin(), el.end());
    } else if (disjoint) {
      out.children.push_back(*e);
    } else {
      throw InvalidCollapse("arranged set splits a chain element");
    }
  }
  if (covered != target) throw InvalidCollapse("arranged set is not covered by chain elements");
  out.filters = std::move(filters);
  n = contract(std::move(out));
  return true;
}

}  // namespace

QueryState collapse_state(const QueryState& s, const std::set<LeafRef>& leaves, MaterializedInfo info,
                          const std::set<std::uint32_t>& consumed_filters) {
  if (leaves.empty()) throw InvalidCollapse("empty arranged set");
  QueryState out = s;
  auto mleaf = LeafRef::materialized(static_cast<std::uint32_t>(out.materialized.size()));
  out.materialized.push_back(std::move(info));
  drop_filters(out.root, consumed_filters);
  if (!collapse_in(out, out.root, leaves, mleaf))
    throw InvalidCollapse("arranged set is not part of the query");
  out.root = wrap_root(std::move(out.root));
  return out;
}

Qrg collapse_materialized(const Qrg& g, const std::set<std::uint32_t>& arranged, MaterializedInfo info,
                          const std::set<std::uint32_t>& consumed_filters) {
  std::set<LeafRef> leaves;
  for (auto v : arranged) leaves.insert(g.pattern(v).leaf);
  if (info.roles.empty()) {
    std::set<std::string> seen;
    for (const auto& pv : g.patterns())
      if (arranged.count(pv.id))
        for (auto& [name, r] : leaf_variables(g.state(), pv.leaf))
          if (seen.insert(name).second) info.roles.emplace_back(name, r);
  }
  if (info.schema.empty())
    for (auto& [name, r] : info.roles) info.schema.push_back(name);
  return build_qrg(collapse_state(g.state(), leaves, std::move(info), consumed_filters));
}

std::string to_dot(const Qrg& g) {
  std::ostringstream out;
  out.precision(6);
  out << "digraph qrg {\n";
  for (const auto& op : g.operators()) {
    out << "  op" << op.id << " [shape=box, label=\"" << op_kind_name(op.kind) << op.id;
    if (op.kind == OpKind::Filter) out << " C" << op.filter + 1;
    out << "\"];\n";
  }
  for (const auto& tp : g.patterns())
    out << "  tp" << tp.id << " [shape=ellipse, label=\"" << leaf_label(tp.leaf) << " w=" << tp.weight << "\"];\n";
  for (std::size_t i = 0; i < g.variables().size(); ++i)
    out << "  v" << i << " [shape=plaintext, label=\"?" << g.variables()[i].name << "\"];\n";
  for (const auto& op : g.operators())
    for (auto c : op.children) out << "  op" << op.id << " -> op" << c << ";\n";
  for (const auto& tp : g.patterns()) out << "  tp" << tp.id << " -> op" << tp.op << " [style=bold];\n";
  for (std::size_t i = 0; i < g.variables().size(); ++i) {
    const auto& v = g.variables()[i];
    for (auto& [tp, r] : v.patterns)
      out << "  v" << i << " -> tp" << tp << " [label=\"" << role_char(r) << "\"];\n";
    for (auto f : v.filters) out << "  v" << i << " -> op" << f << " [style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace rosie
