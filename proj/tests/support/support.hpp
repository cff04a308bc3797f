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

#include <cstdint>
#include <exception>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rosie/runtime.hpp"

namespace rosie::testing {

/// One solution: variable -> N-Triples term; unbound variables are absent.
using Binding = std::map<std::string, std::string>;
/// Solution multiset.
using Bag = std::map<Binding, std::size_t>;

/// Thrown when an intermediate of the brute-force evaluator exceeds its cap.
struct OracleLimit : std::exception {
  const char* what() const noexcept override { return "oracle row cap exceeded"; }
};

/// Brute-force evaluation straight over the algebra tree: nested loops over
/// every triple, no indexes, no planning. Projection and DISTINCT are
/// applied; ORDER BY and LIMIT/OFFSET are not.
Bag oracle_eval(const Query& q, const Dataset& d, std::size_t max_rows = SIZE_MAX);

Bag to_bag(const Relation& r, const Dataset& d);
/// Projection and DISTINCT of the query applied to a bag.
Bag project(const Bag& b, const Query& q);
std::size_t bag_size(const Bag& b);
std::string describe(const Bag& b, std::size_t max_rows = 8);

Dataset dataset_from_nt(const std::string& text);

// ---- random generators ----

struct RandomDataOptions {
  std::size_t triples = 200;
  std::size_t entities = 20;
  std::size_t predicates = 4;
  std::size_t literals = 5;
};

/// N-Triples text over <e#>, <p#> and plain numeric-looking literals "#".
std::string random_nt(std::mt19937& rng, const RandomDataOptions& o = {});

struct RandomQueryOptions {
  std::size_t max_patterns = 8;
  std::size_t entities = 20;
  std::size_t predicates = 4;
  std::size_t literals = 5;
  bool unions = true;
  bool optionals = true;
  bool filters = true;
};

/// SPARQL text with nested groups, UNION, OPTIONAL and FILTER.
std::string random_query(std::mt19937& rng, const RandomQueryOptions& o = {});

// ---- fixtures ----

/// Toy graph: 8 triples over 12 terms.
extern const char* const kToyNt;
Dataset toy_dataset();

/// Social-network query with a filter, a union and an optional part, plus
/// weights that drive the planner through its narrated choices.
extern const char* const kExampleQuery;
std::vector<double> example_weights();
extern const char* const kExampleCs;

/// Star-shaped posts where predicate co-occurrence is deterministic: every
/// post has a type, a language and a content, and is created by one user.
/// Tags point at posts (`?t <taggedOn> ?p`); a few posts carry one marked tag.
struct StarOptions {
  std::size_t posts = 300;
  std::size_t tags_per_post = 10;
  std::size_t tag_pool = 200;
  std::size_t hot_posts = 5;  // posts tagged with the marked tag
  std::size_t noise = 2870;   // unrelated triples sharing predicates/objects
  std::uint32_t seed = 1;
};
std::string correlated_star_nt(const StarOptions& o);
/// Star queries over the correlated generator.
std::vector<std::string> correlated_star_queries();

/// Larger instance where the static plan builds an intermediate far bigger
/// than the answer.
StarOptions adversarial_options();
extern const char* const kAdversarialQuery;

/// Uniform random triples: subject, predicate and object drawn independently.
std::string uncorrelated_nt(std::size_t triples, std::uint32_t seed);
std::vector<std::string> uncorrelated_queries();

}  // namespace rosie::testing
