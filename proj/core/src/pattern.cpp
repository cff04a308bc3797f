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
#include "rosie/pattern.hpp"

#include <algorithm>

namespace rosie {

char role_char(Role r) {
  switch (r) {
    case Role::S: return 'S';
    case Role::P: return 'P';
    case Role::O: return 'O';
  }
  return '?';
}

const PatternTerm& TriplePattern::at(Role r) const {
  return r == Role::S ? s : r == Role::P ? p : o;
}

std::vector<std::string> TriplePattern::variables() const {
  std::vector<std::string> out;
  for (Role r : kRoles) {
    const PatternTerm& t = at(r);
    if (t.is_var() && std::find(out.begin(), out.end(), t.text) == out.end()) out.push_back(t.text);
  }
  return out;
}

std::string make_literal(std::string_view lexical, std::string_view lang,
                         std::string_view datatype) {
  std::string out = "\"";
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  if (!lang.empty()) {
    out += '@';
    out += lang;
  } else if (!datatype.empty()) {
    out += "^^<";
    out += datatype;
    out += '>';
  }
  return out;
}

bool is_literal(std::string_view term) { return !term.empty() && term.front() == '"'; }
bool is_iri(std::string_view term) { return !term.empty() && term.front() == '<'; }

std::string lexical_form(std::string_view term) {
  if (is_iri(term) && term.size() >= 2) return std::string(term.substr(1, term.size() - 2));
  if (!is_literal(term)) return std::string(term);
  std::string out;
  for (std::size_t i = 1; i < term.size(); ++i) {
    char c = term[i];
    if (c == '"') break;
    if (c == '\\' && i + 1 < term.size()) {
      char e = term[++i];
      switch (e) {
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        default: out += e;
      }
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace rosie
