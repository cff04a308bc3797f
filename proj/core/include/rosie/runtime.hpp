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

#include <chrono>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rosie/estimator.hpp"
#include "rosie/executor.hpp"

namespace rosie {

enum class PolicyKind : std::uint8_t { Static, Eager, Rosie };

const char* policy_name(PolicyKind k);
/// Throws Error for unknown names.
PolicyKind parse_policy(std::string_view name);

struct Policy {
  PolicyKind kind = PolicyKind::Rosie;
  double tau = kDefaultTau;      // >= 1
  double sigma = kDefaultSigma;  // in (0, 1]
  std::optional<std::chrono::milliseconds> timeout;
};

struct StepRecord {
  std::size_t idx = 0;
  std::string leaf;  // pattern label, or the text of a composite element
  double est = 0;
  CardinalityInterval bounds;
  double hi_adj = 0;
  bool materialize = false;
  std::optional<std::uint64_t> actual;
  double ms = 0;
};

struct ExecutionTrace {
  std::string query;
  PolicyKind policy = PolicyKind::Rosie;
  std::vector<StepRecord> steps;
  std::uint64_t result_cardinality = 0;
  double total_ms = 0;

  std::size_t materializations() const;
};

struct RunResult {
  Relation result;
  ExecutionTrace trace;
};

/// Estimate and bounds of extending the current prefix with one element.
struct StepCandidate {
  CardinalityInterval bounds;
  double est = 0;
};

/// Rosie trigger: adjusted error of `next` above tau and strictly worse than
/// the best alternative (tau alone when there is none). Eager always, static
/// never.
bool should_materialize(const StepCandidate& next, std::span<const StepCandidate> alternatives,
                        const Policy& policy);

/// Evaluates the query under the policy; modifiers are applied at the end.
RunResult run(const Query& q, const Dataset& d, const Policy& policy, std::string label = {});

/// Graph and candidate sequence of the initial plan (for --explain).
std::string explain(const Query& q, const Dataset& d);

void emit_trace(const ExecutionTrace& trace, std::ostream& out);

}  // namespace rosie
