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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rosie {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position of a term inside a triple.
enum class Role : std::uint8_t { S = 0, P = 1, O = 2 };

inline constexpr Role kRoles[3] = {Role::S, Role::P, Role::O};

char role_char(Role r);

/// A constant (N-Triples syntax, e.g. `<iri>` or `"lit"@en`) or a variable
/// (name without the leading `?`).
struct PatternTerm {
  enum class Kind : std::uint8_t { Constant, Variable };

  Kind kind = Kind::Constant;
  std::string text;

  static PatternTerm var(std::string name) { return {Kind::Variable, std::move(name)}; }
  static PatternTerm constant(std::string term) { return {Kind::Constant, std::move(term)}; }

  bool is_var() const { return kind == Kind::Variable; }
  bool operator==(const PatternTerm&) const = default;
};

struct TriplePattern {
  PatternTerm s, p, o;

  const PatternTerm& at(Role r) const;
  /// Distinct variables in S, P, O order.
  std::vector<std::string> variables() const;
  bool operator==(const TriplePattern&) const = default;
};

/// Canonical N-Triples form of a literal with the given lexical value.
std::string make_literal(std::string_view lexical, std::string_view lang = {},
                         std::string_view datatype = {});

/// Lexical form of a term: IRI without brackets, literal value unescaped,
/// blank node label as written.
std::string lexical_form(std::string_view term);

bool is_literal(std::string_view term);
bool is_iri(std::string_view term);

}  // namespace rosie
