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
#include <algorithm>
#include <map>
#include <sstream>

#include "rosie/query.hpp"

namespace rosie {

SyntaxError::SyntaxError(std::size_t pos, std::string expected)
    : Error("syntax error at offset " + std::to_string(pos) + ": expected " + expected),
      pos_(pos),
      expected_(std::move(expected)) {}

UnsupportedFeature::UnsupportedFeature(std::string feature)
    : Error("unsupported feature: " + feature), feature_(std::move(feature)) {}

const char* compare_op_text(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    case CompareOp::Regex: return "regex";
  }
  return "?";
}

std::string pattern_label(std::uint32_t tp) { return "T" + std::to_string(tp + 1); }

int Query::variable_id(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::pair<std::string, std::vector<VarOccurrence>>> variable_correlations(const Query& q) {
  std::map<std::string, std::vector<VarOccurrence>> occ;
  for (std::uint32_t i = 0; i < q.patterns.size(); ++i)
    for (Role r : kRoles) {
      const PatternTerm& t = q.patterns[i].at(r);
      if (t.is_var()) occ[t.text].push_back({i, r});
    }
  std::vector<std::pair<std::string, std::vector<VarOccurrence>>> out;
  for (const auto& v : q.variables) {
    auto it = occ.find(v);
    if (it != occ.end()) out.emplace_back(v, it->second);
  }
  return out;
}

namespace {

using Kind = SemanticsTree::Kind;

class Printer {
 public:
  explicit Printer(const Query& q) : q_(q), t_(q.semantics) {}

  std::string group(std::int32_t n) {
    std::vector<std::string> els;
    elements(n, t_.at(n).group, els);
    std::string out = "{ ";
    for (auto& e : els) out += e + " ";
    return out + "}";
  }

 private:
  std::string term(const PatternTerm& t) { return t.is_var() ? "?" + t.text : t.text; }

  std::string filter(std::uint32_t i) {
    const FilterExpr& f = q_.filters[i];
    if (f.op == CompareOp::Regex) {
      std::string out = "FILTER(regex(str(?" + f.var + "), " + make_literal(f.operand);
      if (!f.flags.empty()) out += ", " + make_literal(f.flags);
      return out + "))";
    }
    return "FILTER(?" + f.var + " " + compare_op_text(f.op) + " " + f.operand + ")";
  }

  void elements(std::int32_t n, std::uint32_t g, std::vector<std::string>& out) {
    std::vector<std::uint32_t> filters;
    while (t_.at(n).kind == Kind::Filter && t_.at(n).group == g) {
      filters.push_back(t_.at(n).index);
      n = t_.at(n).left;
    }
    std::reverse(filters.begin(), filters.end());
    body(n, g, out);
    for (auto f : filters) out.push_back(filter(f));
  }

  void body(std::int32_t n, std::uint32_t g, std::vector<std::string>& out) {
    const auto& node = t_.at(n);
    if (node.group == g && node.kind == Kind::Opt) {
      body(node.left, g, out);
      out.push_back("OPTIONAL " + group(node.right));
    } else if (node.group == g && node.kind == Kind::And && !node.bgp) {
      body(node.left, g, out);
      element(node.right, g, out);
    } else {
      element(n, g, out);
    }
  }

  void element(std::int32_t n, std::uint32_t g, std::vector<std::string>& out) {
    const auto& node = t_.at(n);
    if (node.group != g) {
      out.push_back(group(n));
    } else if (node.kind == Kind::Pattern) {
      const TriplePattern& tp = q_.patterns[node.index];
      out.push_back(term(tp.s) + " " + term(tp.p) + " " + term(tp.o) + " .");
    } else if (node.kind == Kind::And && node.bgp) {
      element(node.left, g, out);
      element(node.right, g, out);
    } else if (node.kind == Kind::Or) {
      std::vector<std::string> branches;
      union_branches(n, g, branches);
      std::string s;
      for (std::size_t i = 0; i < branches.size(); ++i) s += (i ? " UNION " : "") + branches[i];
      out.push_back(s);
    } else {
      out.push_back(group(n));
    }
  }

  void union_branches(std::int32_t n, std::uint32_t g, std::vector<std::string>& out) {
    const auto& node = t_.at(n);
    if (node.kind == Kind::Or && node.group == g) {
      union_branches(node.left, g, out);
      out.push_back(group(node.right));
    } else {
      out.push_back(group(n));
    }
  }

  const Query& q_;
  const SemanticsTree& t_;
};

// Group ids renumbered by first appearance in pre-order.
SemanticsTree canonical_groups(const SemanticsTree& t) {
  SemanticsTree out = t;
  std::map<std::uint32_t, std::uint32_t> remap;
  std::vector<std::int32_t> stack{t.root};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    if (n < 0) continue;
    auto& node = out.nodes[static_cast<std::size_t>(n)];
    auto [it, fresh] = remap.emplace(node.group, static_cast<std::uint32_t>(remap.size()));
    node.group = it->second;
    stack.push_back(node.right);
    stack.push_back(node.left);
  }
  return out;
}

// Compares subtrees ignoring arena layout. Filters compare by content since
// their numbering depends on where FILTER was written inside the group.
bool same_tree(const Query& qa, const SemanticsTree& a, std::int32_t x, const Query& qb, const SemanticsTree& b,
               std::int32_t y) {
  if (x < 0 || y < 0) return x < 0 && y < 0;
  const auto& n = a.at(x);
  const auto& m = b.at(y);
  bool same_index = n.kind == SemanticsTree::Kind::Filter ? qa.filters.at(n.index) == qb.filters.at(m.index)
                                                          : n.index == m.index;
  return n.kind == m.kind && same_index && n.group == m.group && n.bgp == m.bgp &&
         same_tree(qa, a, n.left, qb, b, m.left) && same_tree(qa, a, n.right, qb, b, m.right);
}

}  // namespace

std::string to_sparql(const Query& q) {
  std::ostringstream out;
  out << "SELECT ";
  if (q.modifiers.distinct) out << "DISTINCT ";
  if (q.select_all) {
    out << "*";
  } else {
    for (std::size_t i = 0; i < q.projection.size(); ++i) out << (i ? " ?" : "?") << q.projection[i];
  }
  out << " WHERE " << Printer(q).group(q.semantics.root);
  if (!q.modifiers.order_by.empty()) {
    out << " ORDER BY";
    for (const auto& k : q.modifiers.order_by) out << (k.descending ? " DESC(?" : " ASC(?") << k.var << ")";
  }
  if (q.modifiers.limit) out << " LIMIT " << *q.modifiers.limit;
  if (q.modifiers.offset) out << " OFFSET " << *q.modifiers.offset;
  return out.str();
}

bool structurally_equal(const Query& a, const Query& b) {
  if (a.patterns != b.patterns || a.filters.size() != b.filters.size() || a.projection != b.projection ||
      a.select_all != b.select_all || !(a.modifiers == b.modifiers))
    return false;
  auto ca = canonical_groups(a.semantics);
  auto cb = canonical_groups(b.semantics);
  return same_tree(a, ca, ca.root, b, cb, cb.root);
}

}  // namespace rosie
