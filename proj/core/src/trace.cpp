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
#include <ostream>

#include <json.hpp>

#include "rosie/runtime.hpp"

namespace rosie {

void emit_trace(const ExecutionTrace& trace, std::ostream& out) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"idx", s.idx},
                     {"leaf", s.leaf},
                     {"est", s.est},
                     {"lo", s.bounds.lo},
                     {"hi", s.bounds.hi},
                     {"hi_adj", s.hi_adj},
                     {"decision", s.materialize ? "materialize" : "continue"},
                     {"actual", s.actual ? nlohmann::ordered_json(*s.actual) : nlohmann::ordered_json(nullptr)},
                     {"ms", s.ms}});
  }
  nlohmann::ordered_json doc = {{"query", trace.query},
                        {"policy", policy_name(trace.policy)},
                        {"steps", std::move(steps)},
                        {"result_cardinality", trace.result_cardinality},
                        {"total_ms", trace.total_ms}};
  out << doc.dump(2) << '\n';
}

}  // namespace rosie
