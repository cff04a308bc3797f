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
// Acceptance driver. `acceptance` runs every check; `acceptance 3 7` runs a
// subset. One PASS/FAIL line per check; the exit code is the failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace rosie;
namespace rt = rosie::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Policy policy(PolicyKind k) {
  Policy p;
  p.kind = k;
  return p;
}

constexpr PolicyKind kPolicies[] = {PolicyKind::Static, PolicyKind::Eager, PolicyKind::Rosie};

bool rel_close(double got, double want, double tol = 1e-9) {
  if (want == 0) return got == 0;
  return std::abs(got - want) <= tol * std::abs(want);
}

// ---- 1. policies against the brute-force evaluator ----

Outcome oracle_equivalence() {
  std::mt19937 rng(20261016);
  const std::size_t kPairs = 500;
  std::size_t pairs = 0, skipped = 0, nonempty = 0, checks = 0;
  Outcome out;
  while (pairs < kPairs) {
    rt::RandomDataOptions dopt;
    dopt.triples = 20 + rng() % 981;
    dopt.entities = 5 + dopt.triples / 10;
    rt::RandomQueryOptions qopt;
    qopt.entities = dopt.entities;
    Dataset d = rt::dataset_from_nt(rt::random_nt(rng, dopt));
    std::string text = rt::random_query(rng, qopt);
    Query q = parse_query(text);
    if (q.patterns.size() > 8) continue;
    rt::Bag want;
    try {
      want = rt::oracle_eval(q, d, 200000);
    } catch (const rt::OracleLimit&) {
      ++skipped;  // cross products too large for nested loops
      continue;
    }
    ++pairs;
    if (!want.empty()) ++nonempty;
    for (auto k : kPolicies) {
      for (double tau : {kDefaultTau, 1.0}) {
        Policy p = policy(k);
        p.tau = tau;
        ++checks;
        rt::Bag got = rt::to_bag(run(q, d, p).result, d);
        if (got != want && out.pass) {
          out.pass = false;
          out.detail = std::string("mismatch under ") + policy_name(k) + ": " + text + "\n  want " +
                       rt::describe(want) + "\n  got  " + rt::describe(got);
        }
      }
    }
  }
  if (out.pass)
    out.detail = std::to_string(pairs) + " pairs (" + std::to_string(nonempty) + " non-empty, " +
                 std::to_string(skipped) + " oversized skipped), " + std::to_string(checks) + " policy runs";
  return out;
}

// ---- 2. rewrites preserve results ----

std::size_t count_operands(const CsNode& n, CsNode::Kind kind) {
  if (n.kind != kind) return 1;
  std::size_t c = 0;
  for (const auto& ch : n.children) c += count_operands(ch, kind);
  return c;
}

void node_paths(const CsNode& n, std::vector<int>& path, std::vector<std::vector<int>>& out) {
  out.push_back(path);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    node_paths(n.children[i], path, out);
    path.pop_back();
  }
}

struct RuleTally {
  std::size_t tried = 0, failed = 0;
  std::string first;
};

rt::Bag execute_bag(const CsNode& cs, const QueryState& s, const Dataset& d) {
  return rt::to_bag(execute(compile(cs, s, d), d), d);
}

// Any operator tree over the patterns, each used once, with every filter
// attached somewhere. Planner output alone rarely has Or below an Opt.
CsNode random_tree(std::mt19937& rng, const Query& q) {
  using K = CsNode::Kind;
  std::vector<CsNode> parts;
  for (std::uint32_t i = 0; i < q.patterns.size(); ++i) parts.push_back(CsNode::make_leaf(LeafRef::pattern(i)));
  for (std::uint32_t f = 0; f < q.filters.size(); ++f) {
    auto& x = parts[rng() % parts.size()];
    x = CsNode::filtered(std::move(x), f);
  }
  while (parts.size() > 1) {
    std::size_t i = rng() % (parts.size() - 1);
    static constexpr K kinds[] = {K::And, K::And, K::Or, K::Opt};
    CsNode n = CsNode::binary(kinds[rng() % 4], std::move(parts[i]), std::move(parts[i + 1]));
    if (rng() % 8 == 0 && !q.filters.empty()) n = CsNode::filtered(std::move(n), rng() % q.filters.size());
    parts[i] = std::move(n);
    parts.erase(parts.begin() + static_cast<long>(i) + 1);
  }
  return parts.front();
}

void check_rewrites(const std::string& text, const Dataset& d, std::map<std::string, RuleTally>& tally,
                    std::mt19937* shuffle = nullptr) {
  auto q = std::make_shared<const Query>(parse_query(text));
  QueryState s = make_state(q, d);
  CsNode cs = shuffle ? random_tree(*shuffle, *q) : plan_cs(build_qrg(s)).cs;
  rt::Bag base = execute_bag(cs, s, d);
  auto record = [&](const std::string& rule, const CsNode& rewritten) {
    RuleTally& t = tally[rule];
    ++t.tried;
    rt::Bag got = execute_bag(rewritten, s, d);
    if (got == base) return;
    if (t.failed++ == 0)
      t.first = text + "\n    " + to_string(cs, *q) + "  ->  " + to_string(rewritten, *q) + "\n    " +
                std::to_string(rt::bag_size(base)) + " rows before, " + std::to_string(rt::bag_size(got)) +
                " after";
  };
  std::vector<std::vector<int>> paths;
  std::vector<int> path;
  node_paths(cs, path, paths);
  for (const auto& p : paths) {
    const CsNode& n = node_at(cs, p);
    if (n.kind == CsNode::Kind::And || n.kind == CsNode::Kind::Or) {
      std::size_t k = count_operands(n, n.kind);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) record("exchange", rewrite_exchange(cs, p, i, j));
    }
    for (int rule = 1; rule <= 4; ++rule) {
      CsNode r;
      try {
        r = rewrite_distribute(cs, rule, p);
      } catch (const ShapeMismatch&) {
        continue;
      }
      record("distribute " + std::to_string(rule), r);
    }
  }
}

Outcome rewrite_equivalence() {
  std::map<std::string, RuleTally> tally;
  // Minimal case for (X Opt (Y Or Z)): a row of X matching exactly one branch.
  check_rewrites("SELECT * WHERE { ?x <p> ?y OPTIONAL { { ?y <q> ?z } UNION { ?y <r> ?w } } }",
                 rt::dataset_from_nt("<a> <p> <b> .\n<b> <q> <c> .\n"), tally);

  std::mt19937 rng(77);
  std::size_t queries = 0;
  while (queries < 3000) {
    rt::RandomDataOptions dopt;
    dopt.triples = 30 + rng() % 171;
    dopt.entities = 12;
    rt::RandomQueryOptions qopt;
    qopt.max_patterns = 5;
    qopt.entities = dopt.entities;
    std::string text = rt::random_query(rng, qopt);
    if (parse_query(text).patterns.size() > 5) continue;
    ++queries;
    // Planned sequences first, then arbitrary operator trees.
    check_rewrites(text, rt::dataset_from_nt(rt::random_nt(rng, dopt)), tally, queries > 600 ? &rng : nullptr);
  }
  Outcome out;
  std::ostringstream s;
  s << queries + 1 << " trees;";
  for (const auto& [rule, t] : tally) {
    s << " " << rule << " " << (t.tried - t.failed) << "/" << t.tried;
    if (t.failed) out.pass = false;
  }
  for (const auto& [rule, t] : tally)
    if (t.failed) s << "\n  " << rule << " breaks bag equality, e.g. " << t.first;
  out.detail = s.str();
  return out;
}

// ---- 3. one-unbound pattern upper bound ----

std::size_t brute_count(const Dataset& d, const TriplePattern& tp) {
  const auto& dict = d.dictionary();
  std::size_t n = 0;
  for (const Triple& t : d.spo()) {
    bool ok = true;
    for (Role r : kRoles) {
      const PatternTerm& pt = tp.at(r);
      if (!pt.is_var() && dict.term(t.at(r)) != pt.text) ok = false;
    }
    n += ok;
  }
  return n;
}

Outcome bound_soundness() {
  std::mt19937 rng(4);
  std::size_t cases = 0, hits = 0, tight = 0;
  Outcome out;
  for (int round = 0; round < 100; ++round) {
    rt::RandomDataOptions dopt;
    dopt.triples = 50 + rng() % 951;
    dopt.entities = 3 + rng() % 60;
    dopt.predicates = 1 + rng() % 8;
    dopt.literals = 1 + rng() % 10;
    Dataset d = rt::dataset_from_nt(rt::random_nt(rng, dopt));
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < d.dictionary().size(); ++i) terms.push_back(d.dictionary().term(i));
    auto pick = [&]() -> std::string {
      if (rng() % 10 == 0) return "<absent" + std::to_string(rng() % 3) + ">";
      return terms[rng() % terms.size()];
    };
    for (int i = 0; i < 100; ++i) {
      TriplePattern tp{PatternTerm::constant(pick()), PatternTerm::constant(pick()), PatternTerm::constant(pick())};
      if (rng() % 4 != 0) {
        // Constants taken from one stored triple, so most patterns match.
        const Triple& t = d.spo()[rng() % d.size()];
        const auto& dict = d.dictionary();
        tp = {PatternTerm::constant(dict.term(t.s)), PatternTerm::constant(dict.term(t.p)),
              PatternTerm::constant(dict.term(t.o))};
      }
      Role free = kRoles[rng() % 3];
      PatternTerm v = PatternTerm::var("v");
      (free == Role::S ? tp.s : free == Role::P ? tp.p : tp.o) = v;
      std::size_t actual = brute_count(d, tp);
      double hi = tp_bounds(tp, d).hi;
      ++cases;
      hits += actual > 0;
      tight += static_cast<double>(actual) == hi;
      if (static_cast<double>(actual) > hi && out.pass) {
        out.pass = false;
        out.detail = "actual " + std::to_string(actual) + " above bound " + std::to_string(hi) + " for " +
                     tp.s.text + " " + tp.p.text + " " + tp.o.text;
      }
    }
  }
  if (out.pass)
    out.detail = std::to_string(cases) + " patterns, " + std::to_string(hits) + " non-empty, " +
                 std::to_string(tight) + " at the bound";
  return out;
}

// ---- 4. bound arithmetic ----

TriplePattern tp3(const std::string& s, const std::string& p, const std::string& o) {
  auto term = [](const std::string& t) {
    return t.front() == '?' ? PatternTerm::var(t.substr(1)) : PatternTerm::constant(t);
  };
  return {term(s), term(p), term(o)};
}

Outcome bound_arithmetic() {
  std::vector<std::string> bad;
  auto expect = [&](const std::string& what, double got, double want) {
    if (!rel_close(got, want)) bad.push_back(what + ": got " + std::to_string(got) + ", want " + std::to_string(want));
  };

  // Histogram entries 300 (predicate) and 70 (object) out of 5000 triples.
  PatternStats ps;
  ps.dataset_size = 5000;
  ps.bound = {std::nullopt, 300, 70};
  auto b = tp_bounds(ps);
  expect("pattern lo", b.lo, 300.0 * 70.0 / 5000.0);
  expect("pattern hi", b.hi, 70);
  auto sel = join_selectivity_bounds(JoinType::SS, 70, 500);
  expect("selectivity lo", sel.lo, 1.0 / (70.0 * 500.0));
  expect("selectivity hi", sel.hi, 1.0 / 500.0);
  std::vector<ChainStep> chain = {{{4.2, 70}, JoinType::None, -1}, {{500, 500}, JoinType::SS, 0},
                                  {{200, 200}, JoinType::SO, 1}};
  expect("chain hi", cs_bounds(chain).hi, 70.0 * 500.0 * 200.0 / 500.0);

  // Toy graph, counted by hand from the triples.
  Dataset d = rt::toy_dataset();
  auto count = [&](Role r, const std::string& term) {
    std::size_t n = 0;
    for (const Triple& t : d.spo()) n += d.dictionary().term(t.at(r)) == term;
    return static_cast<double>(n);
  };
  const double n = static_cast<double>(d.size());
  const double c_type = count(Role::P, "<type>"), c_post = count(Role::O, "<Post>");
  const double c_content = count(Role::P, "<content>");
  auto tb = tp_bounds(tp3("?x", "<type>", "<Post>"), d);
  expect("toy pattern lo", tb.lo, std::max(1.0, c_type * c_post / n));
  expect("toy pattern hi", tb.hi, std::min(c_type, c_post));
  auto cb = tp_bounds(tp3("?x", "<content>", "?c"), d);
  expect("toy content lo", cb.lo, c_content);
  expect("toy content hi", cb.hi, c_content);
  std::vector<ChainStep> toy = {{tb, JoinType::None, -1}, {cb, JoinType::SS, -1}};
  auto tc = cs_bounds(toy);
  expect("toy chain hi", tc.hi, tb.hi * cb.hi / std::max(tb.hi, cb.hi));
  expect("toy chain lo", tc.lo, std::max(1.0, tb.lo * cb.lo / (tb.lo * cb.lo)));
  auto so = join_selectivity_bounds(JoinType::SO, 2, 2);
  expect("toy SO lo", so.lo, 1.0 / 4);
  expect("toy SO hi", so.hi, 1.0);

  Outcome out;
  out.pass = bad.empty();
  std::ostringstream s;
  s << "pattern [" << b.lo << ", " << b.hi << "], selectivity [1/" << 1 / sel.lo << ", 1/" << 1 / sel.hi
    << "], chain hi " << cs_bounds(chain).hi << ", toy [" << tb.lo << ", " << tb.hi << "]";
  for (const auto& m : bad) s << "\n  " << m;
  out.detail = s.str();
  return out;
}

// ---- 5. error ratio ----

Outcome error_ratios() {
  const double a = error_ratio(200, 30), b = error_ratio(500, 30);
  Outcome out;
  out.pass = rel_close(a, 200.0 / 30.0) && rel_close(b, 500.0 / 30.0) && std::round(a * 10) / 10 == 6.7 &&
             std::round(b * 10) / 10 == 16.7;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3f and %.3f", a, b);
  out.detail = buf;
  return out;
}

// ---- 6. example plan ----

Outcome example_plan() {
  auto q = std::make_shared<const Query>(parse_query(rt::kExampleQuery));
  std::string got = to_string(plan_cs(build_qrg(make_state(q, rt::example_weights()))).cs, *q);
  Outcome out;
  out.pass = got == rt::kExampleCs;
  out.detail = got;
  return out;
}

// ---- 7. policy behaviour ----

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome policy_behaviour() {
  Outcome out;
  std::ostringstream s;
  auto fail = [&](const std::string& m) {
    out.pass = false;
    s << "\n  " << m;
  };

  // (a) correlated stars: rosie materializes, and less often than eager.
  {
    Dataset d = rt::dataset_from_nt(rt::correlated_star_nt({}));
    std::size_t total = 0;
    s << "correlated (" << d.size() << " triples) materializations rosie/eager:";
    for (const auto& text : rt::correlated_star_queries()) {
      Query q = parse_query(text);
      RunResult r = run(q, d, policy(PolicyKind::Rosie));
      RunResult e = run(q, d, policy(PolicyKind::Eager));
      total += r.trace.materializations();
      s << " " << r.trace.materializations() << "/" << e.trace.materializations();
      if (r.trace.materializations() >= e.trace.materializations()) fail("rosie not below eager: " + text);
      if (rt::to_bag(r.result, d) != rt::to_bag(e.result, d)) fail("results differ: " + text);
    }
    if (total == 0) fail("rosie never materialized on the correlated fixture");
  }

  // (b) adversarial: the static plan blows up, rosie is not slower.
  {
    Dataset d = rt::dataset_from_nt(rt::correlated_star_nt(rt::adversarial_options()));
    Query q = parse_query(rt::kAdversarialQuery);
    // Eager keeps the static candidate sequence and records every prefix size.
    RunResult e = run(q, d, policy(PolicyKind::Eager));
    std::uint64_t largest = 0;
    for (const auto& st : e.trace.steps)
      if (st.actual) largest = std::max(largest, *st.actual);
    const double result = static_cast<double>(std::max<std::uint64_t>(1, e.trace.result_cardinality));
    const double blowup = static_cast<double>(largest) / result;
    std::vector<double> ts, tr;
    rt::Bag rs, rr;
    for (int i = 0; i < 7; ++i) {
      for (auto k : {PolicyKind::Static, PolicyKind::Rosie}) {
        auto t0 = std::chrono::steady_clock::now();
        RunResult r = run(q, d, policy(k));
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        (k == PolicyKind::Static ? ts : tr).push_back(ms);
        if (i == 0) (k == PolicyKind::Static ? rs : rr) = rt::to_bag(r.result, d);
      }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "; adversarial (%zu triples) blow-up %.0fx (%llu rows for %.0f results), median ms static %.2f "
                  "rosie %.2f",
                  d.size(), blowup, static_cast<unsigned long long>(largest), result, median(ts), median(tr));
    s << buf;
    if (blowup < 50) fail("static plan blow-up below 50");
    if (median(tr) > median(ts)) fail("rosie slower than static");
    if (rs != rr) fail("static and rosie results differ");
  }

  // (c) uncorrelated data: estimates are good enough to never trigger.
  {
    Dataset d = rt::dataset_from_nt(rt::uncorrelated_nt(10000, 3));
    s << "; uncorrelated (" << d.size() << " triples) rosie materializations:";
    for (const auto& text : rt::uncorrelated_queries()) {
      RunResult r = run(parse_query(text), d, policy(PolicyKind::Rosie));
      s << " " << r.trace.materializations();
      if (r.trace.materializations() != 0) fail("rosie materialized on uncorrelated data: " + text);
    }
  }
  out.detail = s.str();
  return out;
}

// ---- 8. filter placement and optional ordering ----

std::set<std::string> certain(const CsNode& n, const Query& q) {
  using K = CsNode::Kind;
  switch (n.kind) {
    case K::Leaf: {
      auto v = q.patterns.at(n.leaf.index).variables();
      return {v.begin(), v.end()};
    }
    case K::And: {
      auto a = certain(n.children[0], q), b = certain(n.children[1], q);
      a.insert(b.begin(), b.end());
      return a;
    }
    case K::Opt:
    case K::Filter:
      return certain(n.children[0], q);
    case K::Or: {
      auto a = certain(n.children[0], q), b = certain(n.children[1], q);
      std::set<std::string> both;
      for (const auto& v : a)
        if (b.count(v)) both.insert(v);
      return both;
    }
  }
  return {};
}

void sem_leaves(const SemanticsTree& t, std::int32_t i, std::set<std::uint32_t>& out) {
  if (i < 0) return;
  const auto& n = t.at(i);
  if (n.kind == SemanticsTree::Kind::Pattern) {
    out.insert(n.index);
    return;
  }
  sem_leaves(t, n.left, out);
  sem_leaves(t, n.right, out);
}

std::set<std::uint32_t> cs_leaf_set(const CsNode& n) {
  std::set<std::uint32_t> out;
  for (auto l : cs_leaves(n)) out.insert(l.index);
  return out;
}

struct StructureCheck {
  const Query& q;
  std::map<std::uint32_t, std::set<std::uint32_t>> scope;  // filter -> patterns of its group
  std::vector<std::string> errors;
  std::size_t pushed = 0, group_level = 0;

  void walk(const CsNode& n, const CsNode* parent, int side) {
    if (n.kind == CsNode::Kind::Filter) {
      const CsNode* x = &n;
      while (x->kind == CsNode::Kind::Filter) x = &x->children[0];
      const std::string& v = q.filters.at(n.filter).var;
      if (certain(*x, q).count(v)) {
        ++pushed;
        // No earlier element of the same chain already provides the variable.
        if (parent && parent->kind == CsNode::Kind::And && side == 1 && certain(parent->children[0], q).count(v))
          errors.push_back("filter on ?" + v + " placed after its variable was available");
      } else {
        ++group_level;
        if (cs_leaf_set(*x) != scope.at(n.filter))
          errors.push_back("filter on ?" + v + " applied to part of its group");
      }
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) walk(n.children[i], &n, static_cast<int>(i));
  }
};

Outcome structural_checks() {
  std::mt19937 rng(8);
  Outcome out;
  std::size_t queries = 0, filters = 0, opts = 0, pushed = 0, group_level = 0;
  while (queries < 1000) {
    std::string text = rt::random_query(rng);
    auto q = std::make_shared<const Query>(parse_query(text));
    ++queries;
    std::vector<double> w(q->patterns.size());
    for (auto& x : w) x = 1 + rng() % 1000;
    CsNode cs = plan_cs(build_qrg(make_state(q, w))).cs;
    std::vector<std::string> errors;

    auto used = cs_filters(cs);
    std::sort(used.begin(), used.end());
    std::vector<std::uint32_t> all(q->filters.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    if (used != all) errors.push_back("filters not placed exactly once");
    filters += q->filters.size();

    StructureCheck sc{*q, {}, {}, 0, 0};
    const auto& t = q->semantics;
    for (const auto& n : t.nodes)
      if (n.kind == SemanticsTree::Kind::Filter) sem_leaves(t, n.left, sc.scope[n.index]);
    if (errors.empty()) sc.walk(cs, nullptr, -1);
    errors.insert(errors.end(), sc.errors.begin(), sc.errors.end());
    pushed += sc.pushed;
    group_level += sc.group_level;

    // Optional parts come after everything they extend.
    std::map<std::uint32_t, std::size_t> pos;
    auto order = cs_leaves(cs);
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i].index] = i;
    for (const auto& n : t.nodes) {
      if (n.kind != SemanticsTree::Kind::Opt) continue;
      ++opts;
      std::set<std::uint32_t> l, r;
      sem_leaves(t, n.left, l);
      sem_leaves(t, n.right, r);
      for (auto a : l)
        for (auto b : r)
          if (pos.at(a) > pos.at(b)) errors.push_back("optional pattern planned before the part it extends");
    }
    if (!errors.empty() && out.pass) {
      out.pass = false;
      out.detail = errors.front() + ": " + text + "\n  " + to_string(cs, *q);
    }
  }
  if (out.pass)
    out.detail = std::to_string(queries) + " queries, " + std::to_string(filters) + " filters (" +
                 std::to_string(pushed) + " on a binding element, " + std::to_string(group_level) +
                 " on their whole group), " + std::to_string(opts) + " optionals";
  return out;
}

// ---- 9. explain output is reproducible across processes ----

#ifndef ROSIE_BIN
#define ROSIE_BIN "rosie"
#endif

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  status = pclose(p);
  return out;
}

Outcome explain_determinism() {
  Outcome out;
  fs::path dir = fs::temp_directory_path() / ("rosie_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  struct Fixture {
    std::string name, nt;
    std::vector<std::string> queries;
  };
  rt::StarOptions small;
  small.noise = 200;
  std::vector<Fixture> fixtures = {
      {"toy", rt::kToyNt,
       {rt::kExampleQuery, "SELECT * WHERE { ?x <type> <Post> . ?u <creator_of> ?x . ?x <content> ?c }"}},
      {"correlated", rt::correlated_star_nt(small), rt::correlated_star_queries()},
      {"adversarial", rt::correlated_star_nt(rt::adversarial_options()), {rt::kAdversarialQuery}},
      {"uncorrelated", rt::uncorrelated_nt(2000, 3), rt::uncorrelated_queries()},
  };
  std::size_t checked = 0;
  for (const auto& f : fixtures) {
    fs::path nt = dir / (f.name + ".nt"), db = dir / f.name;
    std::ofstream(nt) << f.nt;
    int status = 0;
    capture(std::string(ROSIE_BIN) + " load '" + nt.string() + "' --db '" + db.string() + "' 2>&1", status);
    if (status != 0) {
      out.pass = false;
      out.detail = "load failed for " + f.name;
      break;
    }
    for (std::size_t i = 0; i < f.queries.size(); ++i) {
      fs::path rq = dir / (f.name + std::to_string(i) + ".rq");
      std::ofstream(rq) << f.queries[i];
      std::string cmd = std::string(ROSIE_BIN) + " query --db '" + db.string() + "' --file '" + rq.string() +
                        "' --explain 2>&1 >/dev/null";
      std::string first = capture(cmd, status);
      bool same = status == 0 && first.find("CS: ") != std::string::npos;
      for (int k = 0; k < 2 && same; ++k) same = capture(cmd, status) == first && status == 0;
      ++checked;
      if (!same && out.pass) {
        out.pass = false;
        out.detail = "explain output differs or failed for " + f.name + " query " + std::to_string(i);
      }
    }
  }
  fs::remove_all(dir);
  if (out.pass) out.detail = std::to_string(checked) + " fixture queries, 3 runs each, identical bytes";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "oracle equivalence", oracle_equivalence},
      {2, "rewrite equivalence", rewrite_equivalence},
      {3, "pattern upper bound soundness", bound_soundness},
      {4, "bound arithmetic", bound_arithmetic},
      {5, "error ratio", error_ratios},
      {6, "example plan", example_plan},
      {7, "policy behaviour", policy_behaviour},
      {8, "filter and optional placement", structural_checks},
      {9, "explain determinism", explain_determinism},
  };
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!pick.empty() && !pick.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s %d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, s, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
