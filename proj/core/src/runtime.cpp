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
#include "rosie/runtime.hpp"

#include <algorithm>
#include <set>

namespace rosie {

const char* policy_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::Static: return "static";
    case PolicyKind::Eager: return "eager";
    case PolicyKind::Rosie: return "rosie";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view name) {
  if (name == "static") return PolicyKind::Static;
  if (name == "eager") return PolicyKind::Eager;
  if (name == "rosie") return PolicyKind::Rosie;
  throw Error("unknown policy '" + std::string(name) + "'");
}

std::size_t ExecutionTrace::materializations() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const StepRecord& s) { return s.materialize; }));
}

namespace {

double adjusted_error(const StepCandidate& c, double sigma) {
  if (c.bounds.hi <= 0) return 1;
  return adjusted_hi(c.bounds, sigma) / std::max(1.0, c.est);
}

}  // namespace

bool should_materialize(const StepCandidate& next, std::span<const StepCandidate> alternatives,
                        const Policy& policy) {
  if (policy.kind == PolicyKind::Eager) return true;
  if (policy.kind == PolicyKind::Static) return false;
  if (adjusted_error(next, policy.sigma) <= policy.tau) return false;
  if (alternatives.empty()) return true;
  const StepCandidate* best = &alternatives.front();
  for (const auto& a : alternatives)
    if (adjusted_error(a, policy.sigma) < adjusted_error(*best, policy.sigma)) best = &a;
  return !check_error_condition(next.bounds, next.est, best->bounds, best->est, policy.sigma).holds;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Profile {
  CardinalityInterval b;
  double est = 0;
  std::vector<std::pair<std::string, Role>> roles;  // first occurrence per variable
};

void add_roles(std::vector<std::pair<std::string, Role>>& into, const std::vector<std::pair<std::string, Role>>& from) {
  for (const auto& e : from)
    if (std::none_of(into.begin(), into.end(), [&](const auto& x) { return x.first == e.first; })) into.push_back(e);
}

void operands(const CsNode& n, CsNode::Kind kind, std::vector<const CsNode*>& out) {
  if (n.kind != kind) {
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children) operands(c, kind, out);
}

class Runner {
 public:
  Runner(const Query& q, const Dataset& d, const Policy& p, std::string label)
      : d_(d), policy_(p), query_(std::make_shared<const Query>(q)) {
    if (p.timeout) deadline_ = Deadline(*p.timeout);
    trace_.query = std::move(label);
    trace_.policy = p.kind;
  }

  ~Runner() {
    for (auto id : registered_) d_.release_intermediate(id);
  }

  RunResult run() {
    auto t0 = Clock::now();
    state_ = make_state(query_, d_);
    Relation result;
    for (;;) {
      deadline_.check();
      Qrg g = build_qrg(state_);
      Plan plan = plan_cs(g);
      if (auto done = walk(plan.cs)) {
        result = std::move(*done);
        break;
      }
    }
    trace_.result_cardinality = result.size();
    if (!trace_.steps.empty()) trace_.steps.back().actual = result.size();
    trace_.total_ms = ms_since(t0);
    return {std::move(result), std::move(trace_)};
  }

 private:
  // ---- estimates ----
  Profile leaf_profile(LeafRef leaf) const {
    Profile p;
    if (leaf.kind == LeafRef::Kind::Materialized) {
      const auto& m = state_.materialized.at(leaf.index);
      p.b = {m.cardinality, m.cardinality};
      p.est = m.cardinality;
    } else {
      auto ps = pattern_stats(d_, query_->patterns.at(leaf.index));
      p.b = tp_bounds(ps);
      p.est = estimate_tp(ps);
    }
    p.roles = leaf_variables(state_, leaf);
    return p;
  }

  static Role role_of(const Profile& p, const std::string& v) {
    for (const auto& [name, r] : p.roles)
      if (name == v) return r;
    return Role::S;
  }

  // Left-deep chain: each operand joins the latest earlier operand sharing a
  // variable, classified on the lowest-id shared variable.
  Profile fold(const std::vector<Profile>& els) const {
    Profile out = els.front();
    std::vector<ChainStep> steps{{els.front().b, JoinType::None, -1}};
    for (std::size_t k = 1; k < els.size(); ++k) {
      ChainStep st{els[k].b, JoinType::None, -1};
      for (std::size_t p = k; p-- > 0 && st.join == JoinType::None;) {
        int best = -1;
        std::string var;
        for (const auto& [v, r] : els[k].roles)
          if (std::any_of(els[p].roles.begin(), els[p].roles.end(), [&](const auto& e) { return e.first == v; })) {
            int id = query_->variable_id(v);
            if (best < 0 || id < best) best = id, var = v;
          }
        if (best < 0) continue;
        st.join = classify_join(role_of(els[p], var), role_of(els[k], var));
        st.partner = static_cast<int>(p);
      }
      out.est = estimate_join(out.est, els[k].est, st.join);
      add_roles(out.roles, els[k].roles);
      steps.push_back(st);
    }
    out.b = cs_bounds(steps);
    return out;
  }

  Profile profile(const CsNode& n) const {
    switch (n.kind) {
      case CsNode::Kind::Leaf:
        return leaf_profile(n.leaf);
      case CsNode::Kind::Filter: {
        Profile p = profile(n.children[0]);
        p.b.lo = std::min(1.0, p.b.hi);
        p.est *= filter_selectivity(query_->filters.at(n.filter).op);
        return p;
      }
      case CsNode::Kind::And: {
        std::vector<const CsNode*> ops;
        operands(n, CsNode::Kind::And, ops);
        std::vector<Profile> els;
        for (const auto* o : ops) els.push_back(profile(*o));
        return fold(els);
      }
      case CsNode::Kind::Or: {
        std::vector<const CsNode*> ops;
        operands(n, CsNode::Kind::Or, ops);
        Profile out;
        for (const auto* o : ops) {
          Profile p = profile(*o);
          out.b.lo += p.b.lo;
          out.b.hi += p.b.hi;
          out.est += p.est;
          add_roles(out.roles, p.roles);
        }
        return out;
      }
      case CsNode::Kind::Opt: {
        Profile l = profile(n.children[0]);
        Profile r = profile(n.children[1]);
        Profile out = l;
        out.b.hi = l.b.hi * std::max(1.0, r.b.hi);
        out.est = std::max(l.est, estimate_join(l.est, r.est, JoinType::SS));
        add_roles(out.roles, r.roles);
        return out;
      }
    }
    return {};
  }

  // ---- evaluation ----
  void record(const CsNode& element, const CsNode& prefix) {
    Profile p = profile(prefix);
    StepRecord r;
    r.idx = trace_.steps.size();
    r.leaf = element.is_leaf() ? leaf_label(element.leaf) : to_string(element, *query_);
    r.est = p.est;
    r.bounds = p.b;
    r.hi_adj = adjusted_hi(p.b, policy_.sigma);
    trace_.steps.push_back(std::move(r));
  }

  // Executes `prefix` and registers the result as a new materialized leaf.
  MaterializedInfo materialize(const CsNode& prefix) {
    auto t0 = Clock::now();
    PhysicalPlan plan = compile(prefix, state_, d_);
    Relation rel = execute(plan, d_, deadline_);
    MaterializedInfo info;
    info.cardinality = static_cast<double>(rel.size());
    info.schema = rel.schema();
    info.certain = plan.certain;
    for (const auto& leaf : cs_leaves(prefix)) {
      add_roles(info.roles, leaf_variables(state_, leaf));
      if (leaf.kind == LeafRef::Kind::Pattern) {
        info.patterns.push_back(leaf.index);
      } else {
        const auto& inner = state_.materialized.at(leaf.index).patterns;
        info.patterns.insert(info.patterns.end(), inner.begin(), inner.end());
      }
    }
    std::sort(info.patterns.begin(), info.patterns.end());
    info.relation = d_.register_intermediate(std::move(rel));
    registered_.push_back(info.relation);
    StepRecord& last = trace_.steps.back();
    last.materialize = true;
    last.actual = static_cast<std::uint64_t>(info.cardinality);
    last.ms = ms_since(t0);
    return info;
  }

  // Walks the left spine of `cs`. Returns the final result, or nothing when a
  // materialization changed the query and planning has to start over.
  std::optional<Relation> walk(const CsNode& cs) {
    std::vector<const CsNode*> spine;
    for (const CsNode* n = &cs;; n = &n->children[0]) {
      spine.push_back(n);
      if (n->is_leaf()) break;
    }
    std::reverse(spine.begin(), spine.end());

    CsNode acc = *spine[0];
    record(*spine[0], acc);
    std::size_t run_start = 0;  // spine index of the first And of the current chain
    for (std::size_t k = 1; k < spine.size(); ++k) {
      deadline_.check();
      const CsNode& node = *spine[k];
      if (node.kind == CsNode::Kind::Filter) {
        acc = CsNode::filtered(std::move(acc), node.filter);
        continue;
      }
      if (node.kind != CsNode::Kind::And || spine[k - 1]->kind != CsNode::Kind::And) run_start = k;
      bool lone_mat = acc.is_leaf() && acc.leaf.kind == LeafRef::Kind::Materialized;

      bool mat = false;
      if (policy_.kind == PolicyKind::Eager) {
        mat = !lone_mat;
      } else if (policy_.kind == PolicyKind::Rosie && node.kind == CsNode::Kind::And && k - run_start >= 1) {
        mat = decide(spine, run_start, k);
      }
      if (mat) {
        MaterializedInfo info = materialize(acc);
        if (policy_.kind == PolicyKind::Rosie) {
          auto leaves = cs_leaves(acc);
          auto filters = cs_filters(acc);
          state_ = collapse_state(state_, {leaves.begin(), leaves.end()}, std::move(info),
                                  {filters.begin(), filters.end()});
          return std::nullopt;
        }
        state_.materialized.push_back(std::move(info));
        acc = CsNode::make_leaf(LeafRef::materialized(static_cast<std::uint32_t>(state_.materialized.size() - 1)));
      }
      acc = CsNode::binary(node.kind, std::move(acc), node.children[1]);
      record(node.children[1], acc);
    }

    auto t0 = Clock::now();
    PhysicalPlan plan = with_modifiers(compile(acc, state_, d_), *query_);
    Relation out = execute(plan, d_, deadline_);
    trace_.steps.back().ms = ms_since(t0);
    return out;
  }

  // Chain elements: spine[run_start - 1], then the right children of the And
  // nodes run_start..end of the run. The prefix holds the ones before `k`.
  bool decide(const std::vector<const CsNode*>& spine, std::size_t run_start, std::size_t k) {
    std::size_t run_end = k;
    while (run_end + 1 < spine.size() && spine[run_end + 1]->kind == CsNode::Kind::And) ++run_end;
    std::vector<Profile> prefix{profile(*spine[run_start - 1])};
    for (std::size_t i = run_start; i < k; ++i) prefix.push_back(profile(spine[i]->children[1]));
    if (prefix.size() < 2) return false;

    auto extend = [&](const CsNode& e) {
      auto els = prefix;
      els.push_back(profile(e));
      Profile p = fold(els);
      return StepCandidate{p.b, p.est};
    };
    StepCandidate next = extend(spine[k]->children[1]);
    std::vector<StepCandidate> alts;
    for (std::size_t i = k + 1; i <= run_end; ++i) alts.push_back(extend(spine[i]->children[1]));
    return should_materialize(next, alts, policy_);
  }

  const Dataset& d_;
  Policy policy_;
  std::shared_ptr<const Query> query_;
  QueryState state_;
  ExecutionTrace trace_;
  Deadline deadline_;
  std::vector<RelationId> registered_;
};

}  // namespace

RunResult run(const Query& q, const Dataset& d, const Policy& policy, std::string label) {
  if (policy.tau < 1) throw Error("tau must be at least 1");
  if (policy.sigma <= 0 || policy.sigma > 1) throw Error("sigma must lie in (0, 1]");
  return Runner(q, d, policy, std::move(label)).run();
}

std::string explain(const Query& q, const Dataset& d) {
  Qrg g = build_qrg(q, d);
  Plan plan = plan_cs(g);
  return to_dot(g) + "CS: " + to_string(plan.cs, q) + "\n";
}

}  // namespace rosie
