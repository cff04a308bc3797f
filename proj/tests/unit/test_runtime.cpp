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
#include <doctest.h>

#include <random>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

using namespace rosie;

namespace {

Policy policy(PolicyKind k) {
  Policy p;
  p.kind = k;
  return p;
}

}  // namespace

TEST_CASE("policy names") {
  CHECK(parse_policy("eager") == PolicyKind::Eager);
  CHECK(std::string(policy_name(PolicyKind::Static)) == "static");
  CHECK_THROWS_AS(parse_policy("lazy"), Error);
}

TEST_CASE("decision rule") {
  Policy p = policy(PolicyKind::Rosie);
  StepCandidate calm{{1, 40}, 1};      // adjusted error 2
  StepCandidate wild{{1, 400}, 1};     // adjusted error 20
  StepCandidate better{{1, 60}, 1};    // adjusted error 3
  StepCandidate worse{{1, 4000}, 1};   // adjusted error 200
  CHECK_FALSE(should_materialize(calm, {}, p));
  CHECK(should_materialize(wild, {}, p));
  std::vector<StepCandidate> alts{better};
  CHECK(should_materialize(wild, alts, p));
  std::vector<StepCandidate> bad{worse};
  CHECK_FALSE(should_materialize(wild, bad, p));
  CHECK(should_materialize(calm, {}, policy(PolicyKind::Eager)));
  CHECK_FALSE(should_materialize(wild, {}, policy(PolicyKind::Static)));
}

TEST_CASE("static and eager step records") {
  Dataset d = rosie::testing::toy_dataset();
  Query q = parse_query("SELECT * WHERE { ?x <type> <Post> . ?u <creator_of> ?x . ?x <content> ?c }");
  RunResult s = run(q, d, policy(PolicyKind::Static));
  CHECK(s.trace.steps.size() == 3);
  CHECK(s.trace.materializations() == 0);
  CHECK(s.trace.steps.back().actual == 2u);
  RunResult e = run(q, d, policy(PolicyKind::Eager));
  CHECK(e.trace.steps.size() == 3);
  CHECK(e.trace.materializations() == 2);
  for (std::size_t i = 0; i + 1 < e.trace.steps.size(); ++i) {
    CHECK(e.trace.steps[i].materialize);
    CHECK(e.trace.steps[i].actual.has_value());
  }
  CHECK(e.trace.result_cardinality == 2);
}

TEST_CASE("policies agree with the oracle") {
  std::mt19937 rng(31);
  for (int i = 0; i < 120; ++i) {
    Dataset d = rosie::testing::dataset_from_nt(rosie::testing::random_nt(rng));
    std::string text = rosie::testing::random_query(rng);
    CAPTURE(text);
    Query q = parse_query(text);
    auto want = rosie::testing::oracle_eval(q, d);
    for (auto k : {PolicyKind::Static, PolicyKind::Eager, PolicyKind::Rosie}) {
      Policy p = policy(k);
      p.tau = 1;  // trigger as often as the rule allows
      CHECK(rosie::testing::to_bag(run(q, d, p).result, d) == want);
    }
  }
}

TEST_CASE("correlated fixture triggers materialization") {
  Dataset d = rosie::testing::dataset_from_nt(rosie::testing::correlated_star_nt({}));
  Query q = parse_query(rosie::testing::correlated_star_queries().front());
  RunResult r = run(q, d, policy(PolicyKind::Rosie));
  RunResult e = run(q, d, policy(PolicyKind::Eager));
  CHECK(r.trace.materializations() >= 1);
  CHECK(r.trace.materializations() < e.trace.materializations());
  CHECK(rosie::testing::to_bag(r.result, d) == rosie::testing::to_bag(e.result, d));
  for (const auto& s : r.trace.steps) CHECK(s.actual.has_value() == (s.materialize || &s == &r.trace.steps.back()));
}

TEST_CASE("intermediates are released") {
  Dataset d = rosie::testing::toy_dataset();
  Query q = parse_query("SELECT * WHERE { ?x <type> <Post> . ?u <creator_of> ?x . ?x <content> ?c }");
  run(q, d, policy(PolicyKind::Eager));
  // Ids restart nowhere, but nothing registered by the run is still reachable.
  Relation probe({"x"});
  RelationId id = d.register_intermediate(probe);
  for (std::uint32_t i = 0; i < id.value; ++i) CHECK_THROWS(d.intermediate(RelationId{i}));
}

TEST_CASE("timeout") {
  std::mt19937 rng(1);
  rosie::testing::RandomDataOptions o;
  o.triples = 3000;
  o.entities = 3000;
  Dataset d = rosie::testing::dataset_from_nt(rosie::testing::random_nt(rng, o));
  Policy p = policy(PolicyKind::Static);
  p.timeout = std::chrono::milliseconds(1);
  CHECK_THROWS_AS(run(parse_query("SELECT * WHERE { ?a ?b ?c . ?d ?e ?f }"), d, p), Timeout);
}

TEST_CASE("trace json") {
  Dataset d = rosie::testing::toy_dataset();
  Query q = parse_query("SELECT * WHERE { ?x <type> <Post> . ?x <content> ?c }");
  RunResult r = run(q, d, policy(PolicyKind::Eager), "toy.rq");
  std::ostringstream out;
  emit_trace(r.trace, out);
  auto j = nlohmann::json::parse(out.str());
  CHECK(j["query"] == "toy.rq");
  CHECK(j["policy"] == "eager");
  CHECK(j["result_cardinality"] == 2);
  REQUIRE(j["steps"].size() == 2);
  CHECK(j["steps"][0]["decision"] == "materialize");
  CHECK(j["steps"][0]["actual"] == 2);
  CHECK(j["steps"][1]["decision"] == "continue");
  for (const char* k : {"idx", "leaf", "est", "lo", "hi", "hi_adj", "ms"}) CHECK(j["steps"][0].contains(k));
  CHECK(j.contains("total_ms"));
}

TEST_CASE("explain is stable") {
  Dataset d = rosie::testing::toy_dataset();
  Query q = parse_query("SELECT * WHERE { ?x <type> <Post> . ?x <content> ?c }");
  std::string a = explain(q, d);
  CHECK(a == explain(q, d));
  CHECK(a.find("CS: ") != std::string::npos);
}

TEST_CASE("invalid policy parameters") {
  Dataset d = rosie::testing::toy_dataset();
  Query q = parse_query("SELECT * WHERE { ?x <type> <Post> }");
  Policy p;
  p.tau = 0.5;
  CHECK_THROWS_AS(run(q, d, p), Error);
  p.tau = 8;
  p.sigma = 0;
  CHECK_THROWS_AS(run(q, d, p), Error);
}
