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

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

namespace rosie {

CsNode CsNode::make_leaf(LeafRef l) {
  CsNode n;
  n.leaf = l;
  return n;
}

CsNode CsNode::binary(Kind k, CsNode left, CsNode right) {
  CsNode n;
  n.kind = k;
  n.children.push_back(std::move(left));
  n.children.push_back(std::move(right));
  return n;
}

CsNode CsNode::filtered(CsNode child, std::uint32_t filter) {
  CsNode n;
  n.kind = Kind::Filter;
  n.filter = filter;
  n.children.push_back(std::move(child));
  return n;
}

IncidenceClass incidence_class(const Qrg& g, std::uint32_t vertex) {
  bool s = false, p = false, o = false;
  for (auto& [name, r] : g.pattern(vertex).vars) {
    s |= r == Role::S;
    p |= r == Role::P;
    o |= r == Role::O;
  }
  if (s && p && o) return IncidenceClass::SPO;
  if (s && o) return IncidenceClass::SO;
  if (p && o) return IncidenceClass::PO;
  if (s && p) return IncidenceClass::SP;
  if (o) return IncidenceClass::O;
  if (s) return IncidenceClass::S;
  if (p) return IncidenceClass::P;
  return IncidenceClass::None;
}

const char* incidence_class_name(IncidenceClass c) {
  static constexpr const char* kNames[] = {"{}", "P", "S", "O", "S,P", "P,O", "S,O", "S,P,O"};
  return kNames[static_cast<int>(c)];
}

std::vector<std::uint32_t> h1_rank(const Qrg& g, std::vector<std::uint32_t> candidates) {
  auto key = [&](std::uint32_t v) {
    const auto& pv = g.pattern(v);
    return std::make_tuple(static_cast<int>(incidence_class(g, v)), pv.weight, pv.leaf);
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
  return candidates;
}

namespace {

class Planner {
 public:
  explicit Planner(const Qrg& g) : g_(g), n_(g.patterns().size()) {
    for (const auto& op : g.operators()) {
      if (op.kind == OpKind::Filter) continue;
      bool unit = op.kind == OpKind::Or || op.kind == OpKind::Opt;
      if (op.parent >= 0) {
        auto pk = g.op(static_cast<std::uint32_t>(op.parent)).kind;
        unit |= pk == OpKind::Or || pk == OpKind::Opt;
      }
      if (unit) units_.push_back(op.id);
    }
    // Nested And nodes that the chain flattening keeps opaque are units too.
    mark_opaque(g.state().root);
    requires_.resize(n_);
    mark_optional(g.state().root);
  }

  Plan run() {
    std::vector<std::uint32_t> order;
    std::vector<bool> arranged(n_, false);
    std::int32_t current = -1;
    while (order.size() < n_) {
      auto pool = scope_pool(arranged);
      std::vector<std::uint32_t> admissible;
      for (auto v : pool)
        if (std::all_of(requires_[v].begin(), requires_[v].end(), [&](std::uint32_t l) { return arranged[l]; }))
          admissible.push_back(v);
      if (admissible.empty()) admissible = pool;
      if (admissible.empty()) throw PlanningStuck("no candidate pattern left to arrange");

      std::uint32_t pick;
      if (current < 0) {
        pick = h1_rank(g_, admissible).front();
      } else {
        pick = choose(candidates(admissible, arranged, static_cast<std::uint32_t>(current)), arranged,
                      static_cast<std::uint32_t>(current));
      }
      arranged[pick] = true;
      order.push_back(pick);
      current = static_cast<std::int32_t>(pick);
    }
    for (std::size_t i = 0; i < order.size(); ++i) rank_[g_.pattern(order[i]).leaf] = i;

    Plan plan;
    plan.cs = generate(g_.state().root, {});
    plan.order = cs_leaves(plan.cs);
    return plan;
  }

 private:
  // A pattern on the optional side of an Opt waits for the whole mandatory side.
  void mark_optional(const PlanNode& n) {
    if (n.kind == PlanNode::Kind::Opt) {
      std::vector<std::uint32_t> left;
      for (const auto& l : leaves_of(n.children[0])) left.push_back(static_cast<std::uint32_t>(g_.vertex_of(l)));
      for (const auto& l : leaves_of(n.children[1])) {
        auto& req = requires_[static_cast<std::size_t>(g_.vertex_of(l))];
        req.insert(req.end(), left.begin(), left.end());
      }
    }
    for (const auto& c : n.children) mark_optional(c);
  }

  void mark_opaque(const PlanNode& n) {
    if (n.kind == PlanNode::Kind::And) {
      auto chain = and_chain(g_.state(), n);
      for (const PlanNode* e : chain)
        if (e->kind == PlanNode::Kind::And && e->id >= 0) units_.push_back(static_cast<std::uint32_t>(e->id));
    }
    for (const auto& c : n.children) mark_opaque(c);
  }

  // Patterns of the innermost unit that has been started but not finished;
  // every pattern when no unit is open.
  std::vector<std::uint32_t> scope_pool(const std::vector<bool>& arranged) const {
    std::int32_t best = -1;
    std::vector<std::uint32_t> best_members;
    for (auto u : units_) {
      auto members = g_.subtree_patterns(u);
      bool any = false, all = true;
      for (auto m : members) {
        any |= arranged[m];
        all &= arranged[m];
      }
      if (!any || all) continue;
      if (best < 0 || g_.op(u).depth > g_.op(static_cast<std::uint32_t>(best)).depth) {
        best = static_cast<std::int32_t>(u);
        best_members = std::move(members);
      }
    }
    std::vector<std::uint32_t> pool;
    if (best < 0) {
      for (std::uint32_t v = 0; v < n_; ++v)
        if (!arranged[v]) pool.push_back(v);
    } else {
      for (auto m : best_members)
        if (!arranged[m]) pool.push_back(m);
    }
    return pool;
  }

  bool shares_var(std::uint32_t a, std::uint32_t b) const {
    for (auto& [x, r] : g_.pattern(a).vars)
      for (auto& [y, s] : g_.pattern(b).vars)
        if (x == y) return true;
    return false;
  }

  bool star(std::uint32_t a, std::uint32_t b) const {
    for (auto& e : g_.pattern(a).vars)
      for (auto& f : g_.pattern(b).vars)
        if (e == f) return true;
    return false;
  }

  bool connected(std::uint32_t v, const std::vector<bool>& arranged) const {
    for (std::uint32_t a = 0; a < n_; ++a)
      if (arranged[a] && shares_var(v, a)) return true;
    return false;
  }

  // Region of the current pattern first, then the nearest region reachable
  // through an available variable.
  std::vector<std::uint32_t> candidates(const std::vector<std::uint32_t>& admissible,
                                        const std::vector<bool>& arranged, std::uint32_t current) const {
    std::vector<std::uint32_t> region;
    for (auto v : admissible)
      if (g_.pattern(v).op == g_.pattern(current).op) region.push_back(v);
    if (!region.empty()) return region;

    std::vector<std::uint32_t> linked;
    for (auto v : admissible)
      if (connected(v, arranged)) linked.push_back(v);
    if (linked.empty()) return admissible;
    auto region_key = [&](std::uint32_t v) {
      const auto& op = g_.op(g_.pattern(v).op);
      return std::make_pair(op.depth, op.id);
    };
    auto best = region_key(linked.front());
    for (auto v : linked) best = std::min(best, region_key(v));
    std::vector<std::uint32_t> out;
    for (auto v : linked)
      if (region_key(v) == best) out.push_back(v);
    return out;
  }

  std::uint32_t choose(const std::vector<std::uint32_t>& cands, const std::vector<bool>& arranged,
                       std::uint32_t current) const {
    std::vector<std::uint32_t> stars, linked;
    for (auto v : cands) {
      if (star(v, current)) stars.push_back(v);
      if (connected(v, arranged)) linked.push_back(v);
    }
    if (!stars.empty()) return h1_rank(g_, stars).front();
    if (!linked.empty()) return h1_rank(g_, linked).front();
    return h1_rank(g_, cands).front();
  }

  // ---- generation ----
  std::size_t rank(const PlanNode& n) const {
    std::size_t r = std::numeric_limits<std::size_t>::max();
    for (const auto& l : leaves_of(n)) r = std::min(r, rank_.at(l));
    return r;
  }

  const std::string& filter_var(std::uint32_t f) const { return g_.query().filters.at(f).var; }

  static CsNode wrap(CsNode c, std::vector<std::uint32_t> filters) {
    std::sort(filters.begin(), filters.end());
    for (auto f : filters) c = CsNode::filtered(std::move(c), f);
    return c;
  }

  CsNode generate(const PlanNode& n, std::vector<std::uint32_t> inherited) const {
    const QueryState& s = g_.state();
    switch (n.kind) {
      case PlanNode::Kind::Leaf: {
        inherited.insert(inherited.end(), n.filters.begin(), n.filters.end());
        return wrap(CsNode::make_leaf(n.leaf), inherited);
      }
      case PlanNode::Kind::And: {
        auto els = and_chain(s, n);
        std::stable_sort(els.begin(), els.end(),
                         [&](const PlanNode* a, const PlanNode* b) { return rank(*a) < rank(*b); });
        auto filters = and_chain_filters(s, n);
        filters.insert(filters.end(), inherited.begin(), inherited.end());
        std::sort(filters.begin(), filters.end());
        std::vector<std::vector<std::uint32_t>> pushed(els.size());
        std::vector<std::uint32_t> top;
        std::vector<std::set<std::string>> cert;
        for (const PlanNode* e : els) cert.push_back(certain_variables(s, *e));
        for (auto f : filters) {
          std::size_t k = 0;
          while (k < els.size() && !cert[k].count(filter_var(f))) ++k;
          if (k < els.size()) pushed[k].push_back(f);
          else top.push_back(f);
        }
        CsNode c = generate(*els[0], pushed[0]);
        for (std::size_t k = 1; k < els.size(); ++k)
          c = CsNode::binary(CsNode::Kind::And, std::move(c), generate(*els[k], pushed[k]));
        return wrap(std::move(c), top);
      }
      case PlanNode::Kind::Or: {
        auto els = or_chain(n);
        std::stable_sort(els.begin(), els.end(),
                         [&](const PlanNode* a, const PlanNode* b) { return rank(*a) < rank(*b); });
        CsNode c = generate(*els[0], {});
        for (std::size_t k = 1; k < els.size(); ++k)
          c = CsNode::binary(CsNode::Kind::Or, std::move(c), generate(*els[k], {}));
        inherited.insert(inherited.end(), n.filters.begin(), n.filters.end());
        return wrap(std::move(c), inherited);
      }
      case PlanNode::Kind::Opt: {
        auto left_cert = certain_variables(s, n.children[0]);
        std::vector<std::uint32_t> down, top;
        inherited.insert(inherited.end(), n.filters.begin(), n.filters.end());
        for (auto f : inherited) (left_cert.count(filter_var(f)) ? down : top).push_back(f);
        CsNode c = CsNode::binary(CsNode::Kind::Opt, generate(n.children[0], down), generate(n.children[1], {}));
        return wrap(std::move(c), top);
      }
    }
    throw PlanningStuck("unknown plan node");
  }

  const Qrg& g_;
  std::size_t n_;
  std::vector<std::uint32_t> units_;
  std::vector<std::vector<std::uint32_t>> requires_;
  std::map<LeafRef, std::size_t> rank_;
};

void leaves_into(const CsNode& n, std::vector<LeafRef>& out) {
  if (n.is_leaf()) {
    out.push_back(n.leaf);
    return;
  }
  for (const auto& c : n.children) leaves_into(c, out);
}

void filters_into(const CsNode& n, std::vector<std::uint32_t>& out) {
  if (n.kind == CsNode::Kind::Filter) out.push_back(n.filter);
  for (const auto& c : n.children) filters_into(c, out);
}

const char* op_word(CsNode::Kind k) {
  switch (k) {
    case CsNode::Kind::And: return "And";
    case CsNode::Kind::Or: return "Or";
    case CsNode::Kind::Opt: return "Opt";
    case CsNode::Kind::Filter: return "Filter";
    default: return "";
  }
}

std::string print(const CsNode& n, const Query& q, bool top) {
  if (n.is_leaf()) return top ? "(" + leaf_label(n.leaf) + ")" : leaf_label(n.leaf);
  std::string inner;
  if (n.kind == CsNode::Kind::Filter) {
    std::string label = q.filters.size() == 1 ? "C" : "C" + std::to_string(n.filter + 1);
    inner = print(n.children[0], q, false) + " Filter " + label;
  } else {
    inner = print(n.children[0], q, false) + " " + op_word(n.kind) + " " + print(n.children[1], q, false);
  }
  return top ? inner : "(" + inner + ")";
}

}  // namespace

Plan plan_cs(const Qrg& g) { return Planner(g).run(); }

std::vector<LeafRef> cs_leaves(const CsNode& cs) {
  std::vector<LeafRef> out;
  leaves_into(cs, out);
  return out;
}

std::vector<std::uint32_t> cs_filters(const CsNode& cs) {
  std::vector<std::uint32_t> out;
  filters_into(cs, out);
  return out;
}

std::string to_string(const CsNode& cs, const Query& q) { return print(cs, q, true); }

}  // namespace rosie
