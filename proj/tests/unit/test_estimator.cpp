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

#include "support.hpp"

using namespace rosie;

namespace {

TriplePattern tp(std::string s, std::string p, std::string o) {
  auto term = [](std::string t) {
    return t.front() == '?' ? PatternTerm::var(t.substr(1)) : PatternTerm::constant(std::move(t));
  };
  return {term(std::move(s)), term(std::move(p)), term(std::move(o))};
}

PatternStats example4(std::optional<std::uint64_t> s, std::optional<std::uint64_t> p,
                      std::optional<std::uint64_t> o) {
  PatternStats ps;
  ps.dataset_size = 5000;
  ps.bound = {s, p, o};
  return ps;
}

}  // namespace

TEST_CASE("single pattern estimates on the toy graph") {
  Dataset d = rosie::testing::toy_dataset();
  CHECK(estimate_tp(tp("?x", "<type>", "<Post>"), d) == doctest::Approx(8.0 * 3 / 8 * 2 / 8));
  CHECK(estimate_tp(tp("?s", "?p", "?o"), d) == 8);
  CHECK(estimate_tp(tp("<u1>", "<creator_of>", "?y"), d) == doctest::Approx(1.0));
  CHECK(estimate_tp(tp("<zz>", "?p", "?o"), d) == 0);
}

TEST_CASE("join estimates") {
  CHECK(estimate_join(2, 2, JoinType::SS) == 2);
  CHECK(estimate_join(3, 7, JoinType::None) == 21);
  CHECK(estimate_join(0, 5, JoinType::SO) == 0);
  CHECK(estimate_join(0.5, 0.5, JoinType::OO) == doctest::Approx(0.25));
}

TEST_CASE("join classification") {
  CHECK(classify_join(Role::S, Role::O) == JoinType::SO);
  CHECK(classify_join(Role::P, Role::P) == JoinType::PP);
  CHECK(std::string(join_type_name(JoinType::OS)) == "OS");
  CHECK(same_position(JoinType::OO));
  CHECK_FALSE(same_position(JoinType::SO));
  CHECK_FALSE(same_position(JoinType::None));
}

TEST_CASE("pattern bounds") {
  Dataset d = rosie::testing::toy_dataset();
  CHECK(tp_bounds(tp("?s", "<type>", "<Post>"), d) == CardinalityInterval{1, 2});
  CHECK(tp_bounds(tp("?s", "?p", "?o"), d) == CardinalityInterval{8, 8});
  CHECK(tp_bounds(tp("?s", "<creator_of>", "?o"), d) == CardinalityInterval{2, 2});
  CHECK(tp_bounds(tp("<u1>", "<knows>", "<u2>"), d) == CardinalityInterval{1, 1});
  CHECK(tp_bounds(tp("<u2>", "<knows>", "<u1>"), d) == CardinalityInterval{0, 0});
  CHECK(tp_bounds(tp("?s", "<nope>", "?o"), d) == CardinalityInterval{0, 0});
  CHECK(tp_bounds(tp("?x", "?p", "?x"), d) == CardinalityInterval{1, 8});

  auto b = tp_bounds(example4(std::nullopt, 300, 70));
  CHECK(b.lo == doctest::Approx(4.2).epsilon(1e-12));
  CHECK(b.hi == 70);
  CHECK(tp_bounds(example4(std::nullopt, 200, std::nullopt)) == CardinalityInterval{200, 200});
}

TEST_CASE("join selectivity bounds") {
  auto ss = join_selectivity_bounds(JoinType::SS, 70, 500);
  CHECK(ss.lo == doctest::Approx(1.0 / 35000).epsilon(1e-12));
  CHECK(ss.hi == doctest::Approx(1.0 / 500).epsilon(1e-12));
  CHECK(join_selectivity_bounds(JoinType::SO, 2, 2) == CardinalityInterval{0.25, 1});
  for (auto jt : {JoinType::SS, JoinType::SO, JoinType::PO, JoinType::OO})
    CHECK(join_selectivity_bounds(jt, 1, 1) == CardinalityInterval{1, 1});
  CHECK_THROWS_AS(join_selectivity_bounds(JoinType::SS, 0.5, 3), DegenerateCard);
}

TEST_CASE("chain bounds") {
  std::vector<ChainStep> steps = {{{4.2, 70}, JoinType::None, -1}, {{500, 500}, JoinType::SS, 0},
                                  {{200, 200}, JoinType::SO, 1}};
  auto b = cs_bounds(steps);
  CHECK(b.hi == doctest::Approx(1.4e4).epsilon(1e-12));
  CHECK(b.lo == 1);

  std::vector<ChainStep> one = {{{3, 9}, JoinType::None, -1}};
  CHECK(cs_bounds(one) == CardinalityInterval{3, 9});

  Dataset d = rosie::testing::toy_dataset();
  std::vector<ChainStep> toy = {{tp_bounds(tp("?x", "<type>", "<Post>"), d), JoinType::None, -1},
                                {tp_bounds(tp("?x", "<content>", "?c"), d), JoinType::SS, -1}};
  CHECK(cs_bounds(toy) == CardinalityInterval{1, 2});
}

TEST_CASE("widening inputs never narrows chain bounds") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<> card(1, 100);
  for (int i = 0; i < 200; ++i) {
    std::vector<ChainStep> a, b;
    for (int k = 0; k < 4; ++k) {
      double lo = card(rng), hi = lo + card(rng);
      auto jt = k == 0 ? JoinType::None : static_cast<JoinType>(rng() % 9);
      a.push_back({{lo, hi}, jt, -1});
      b.push_back({{std::max(1.0, lo / 2), hi * 2}, jt, -1});
    }
    auto na = cs_bounds(a), wb = cs_bounds(b);
    CHECK(wb.hi >= na.hi);
  }
}

TEST_CASE("error propagation") {
  auto and_ = propagate_error(ErrorOp::And, {2, 2}, {3, 3}, {1, 1});
  CHECK(and_.lo == 6);
  CHECK(and_.hi == 6);
  auto or_ = propagate_error(ErrorOp::Or, {1, 4}, {2, 3}, {1, 1});
  CHECK(or_.lo == 2);
  CHECK(or_.hi == 4);
  auto f = propagate_error(ErrorOp::Filter, {9, 9}, {9, 9}, kFilterError);
  CHECK(f.lo == 0.5);
  CHECK(f.hi == 2);
}

TEST_CASE("error ratio") {
  CHECK(error_ratio(200, 30) == doctest::Approx(200.0 / 30).epsilon(1e-12));
  CHECK(error_ratio(500, 30) == doctest::Approx(500.0 / 30).epsilon(1e-12));
  CHECK(error_ratio(30, 30) == 1);
  CHECK(error_ratio(0, 0) == 1);
  CHECK_THROWS_AS(error_ratio(5, 0), ZeroEstimate);
}

TEST_CASE("error condition") {
  CHECK(check_error_condition({1, 100}, 10, {1, 100}, 10, 0.05).holds);
  auto c = check_error_condition({1, 7e6}, 50, {1, 1.4e4}, 50, 1.0);
  CHECK_FALSE(c.holds);
  CHECK(c.eps_cur == doctest::Approx(7e6 / 50));
  CHECK(check_error_condition({1, 7e6}, 50, {1, 1.4e4}, 50, 1e-9).holds);
  CHECK(adjusted_hi({4, 1000}, 0.05) == 50);
  CHECK(adjusted_hi({4, 10}, 0.05) == 4);
}

TEST_CASE("filter selectivities") {
  CHECK(filter_selectivity(CompareOp::Eq) == doctest::Approx(0.1));
  CHECK(filter_selectivity(CompareOp::Lt) == doctest::Approx(1.0 / 3));
  CHECK(filter_selectivity(CompareOp::Regex) == doctest::Approx(0.25));
}

TEST_CASE("one-unbound upper bound holds on random data") {
  std::mt19937 rng(9);
  for (int round = 0; round < 20; ++round) {
    Dataset d = rosie::testing::dataset_from_nt(rosie::testing::random_nt(rng));
    for (int i = 0; i < 50; ++i) {
      std::string e = "<e" + std::to_string(rng() % 20) + ">", p = "<p" + std::to_string(rng() % 4) + ">";
      TriplePattern t;
      switch (rng() % 3) {
        case 0: t = tp("?v", p, e); break;
        case 1: t = tp(e, "?v", e); break;
        default: t = tp(e, p, "?v"); break;
      }
      CHECK(static_cast<double>(scan(d, t).size()) <= tp_bounds(t, d).hi);
    }
  }
}
