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
#include "rosie/planner.hpp"

namespace rosie {

namespace {

using K = CsNode::Kind;

CsNode& mutable_at(CsNode& cs, const std::vector<int>& path) {
  CsNode* n = &cs;
  for (int i : path) {
    if (i < 0 || static_cast<std::size_t>(i) >= n->children.size()) throw ShapeMismatch("path leaves the tree");
    n = &n->children[static_cast<std::size_t>(i)];
  }
  return *n;
}

// Maximal subtrees below `n` whose root is not `kind`.
void operands(CsNode& n, K kind, std::vector<CsNode*>& out) {
  if (n.kind != kind) {
    out.push_back(&n);
    return;
  }
  for (auto& c : n.children) operands(c, kind, out);
}

}  // namespace

const CsNode& node_at(const CsNode& cs, const std::vector<int>& path) {
  return mutable_at(const_cast<CsNode&>(cs), path);
}

CsNode rewrite_exchange(const CsNode& cs, const std::vector<int>& path, std::size_t i, std::size_t j) {
  CsNode out = cs;
  CsNode& sub = mutable_at(out, path);
  if (sub.kind != K::And && sub.kind != K::Or) throw NotExchangeable("subtree root is not And or Or");
  std::vector<CsNode*> ops;
  operands(sub, sub.kind, ops);
  if (i >= ops.size() || j >= ops.size()) throw NotExchangeable("operand position out of range");
  if (i != j) std::swap(*ops[i], *ops[j]);
  return out;
}

CsNode rewrite_distribute(const CsNode& cs, int rule, const std::vector<int>& path) {
  CsNode out = cs;
  CsNode& n = mutable_at(out, path);
  switch (rule) {
    case 1:
    case 2: {
      K op = rule == 1 ? K::And : K::Opt;
      if (n.kind != op || n.children[1].kind != K::Or) throw ShapeMismatch("expected (X op (Y Or Z))");
      CsNode x = n.children[0];
      CsNode y = n.children[1].children[0];
      CsNode z = n.children[1].children[1];
      n = CsNode::binary(K::Or, CsNode::binary(op, x, std::move(z)), CsNode::binary(op, x, std::move(y)));
      return out;
    }
    case 3: {
      if (n.kind != K::Opt || n.children[0].kind != K::Or) throw ShapeMismatch("expected ((X Or Y) Opt Z)");
      CsNode x = n.children[0].children[0];
      CsNode y = n.children[0].children[1];
      CsNode z = n.children[1];
      n = CsNode::binary(K::Or, CsNode::binary(K::Opt, std::move(x), z), CsNode::binary(K::Opt, std::move(y), z));
      return out;
    }
    case 4: {
      if (n.kind != K::Filter || n.children[0].kind != K::Or) throw ShapeMismatch("expected ((X Or Y) Filter C)");
      std::uint32_t f = n.filter;
      CsNode x = n.children[0].children[0];
      CsNode y = n.children[0].children[1];
      n = CsNode::binary(K::Or, CsNode::filtered(std::move(x), f), CsNode::filtered(std::move(y), f));
      return out;
    }
    default:
      throw ShapeMismatch("unknown distribution rule " + std::to_string(rule));
  }
}

}  // namespace rosie
