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
#include <algorithm>
#include <cctype>
#include <map>

#include "rosie/query.hpp"

namespace rosie {

namespace {

constexpr const char* kXsd = "http://www.w3.org/2001/XMLSchema#";
constexpr const char* kRdfType = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         static_cast<unsigned char>(c) >= 0x80;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

CompareOp flip(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return CompareOp::Gt;
    case CompareOp::Le: return CompareOp::Ge;
    case CompareOp::Gt: return CompareOp::Lt;
    case CompareOp::Ge: return CompareOp::Le;
    default: return op;
  }
}

using Kind = SemanticsTree::Kind;

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Query run() {
    prologue();
    if (keyword_ahead("ASK") || keyword_ahead("CONSTRUCT") || keyword_ahead("DESCRIBE"))
      throw UnsupportedFeature(upper(peek_word()) + " query form");
    expect_keyword("SELECT");
    if (accept_keyword("DISTINCT")) q_.modifiers.distinct = true;
    else accept_keyword("REDUCED");
    skip_ws();
    if (accept('*')) {
      q_.select_all = true;
    } else {
      for (;;) {
        skip_ws();
        if (peek() == '(') throw UnsupportedFeature("projection expression");
        if (peek() != '?' && peek() != '$') break;
        q_.projection.push_back(variable());
      }
      if (q_.projection.empty()) fail("projection variable or '*'");
    }
    if (keyword_ahead("FROM")) throw UnsupportedFeature("dataset clause");
    accept_keyword("WHERE");
    q_.semantics.root = group();
    modifiers();
    skip_ws();
    if (!at_end()) {
      if (keyword_ahead("VALUES")) throw UnsupportedFeature("VALUES");
      fail("end of query");
    }
    if (q_.select_all) {
      for (const auto& tp : q_.patterns)
        for (auto& v : tp.variables())
          if (std::find(q_.projection.begin(), q_.projection.end(), v) == q_.projection.end())
            q_.projection.push_back(v);
    }
    return std::move(q_);
  }

 private:
  // ---- lexical helpers ----
  bool at_end() const { return i_ >= s_.size(); }
  char peek(std::size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }

  void skip_ws() {
    while (!at_end()) {
      char c = s_[i_];
      if (c == '#') {
        while (!at_end() && s_[i_] != '\n') ++i_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& expected) { throw SyntaxError(i_, expected); }

  bool accept(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }

  std::string_view peek_word() {
    skip_ws();
    std::size_t j = i_;
    while (j < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
    return s_.substr(i_, j - i_);
  }
  bool keyword_ahead(std::string_view kw) {
    auto w = peek_word();
    if (w.size() != kw.size() || upper(w) != kw) return false;
    // Not a prefixed name such as `select:x`.
    std::size_t j = i_ + w.size();
    return j >= s_.size() || (s_[j] != ':' && !name_char(s_[j]));
  }
  bool accept_keyword(std::string_view kw) {
    if (!keyword_ahead(kw)) return false;
    i_ += kw.size();
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail(std::string(kw));
  }

  std::string variable() {
    skip_ws();
    if (peek() != '?' && peek() != '$') fail("variable");
    ++i_;
    std::size_t start = i_;
    while (!at_end() && name_char(s_[i_])) ++i_;
    if (i_ == start) fail("variable name");
    return std::string(s_.substr(start, i_ - start));
  }

  std::string iriref() {
    skip_ws();
    if (peek() != '<') fail("IRI");
    std::size_t start = i_++;
    while (!at_end() && s_[i_] != '>') {
      char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"') fail("'>' closing IRI");
      ++i_;
    }
    if (at_end()) fail("'>' closing IRI");
    ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  bool pname_ahead() {
    skip_ws();
    std::size_t j = i_;
    while (j < s_.size() && name_char(s_[j])) ++j;
    return j < s_.size() && s_[j] == ':' && (j == i_ || std::isalpha(static_cast<unsigned char>(s_[i_])));
  }

  std::string pname() {
    skip_ws();
    std::size_t start = i_;
    while (!at_end() && name_char(s_[i_])) ++i_;
    std::string prefix(s_.substr(start, i_ - start));
    if (peek() != ':') fail("prefixed name");
    ++i_;
    std::size_t lstart = i_;
    while (!at_end() && (name_char(s_[i_]) || s_[i_] == '.')) ++i_;
    while (i_ > lstart && s_[i_ - 1] == '.') --i_;
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) {
      i_ = start;
      fail("declared prefix '" + prefix + ":'");
    }
    return "<" + it->second + std::string(s_.substr(lstart, i_ - lstart)) + ">";
  }

  std::string iri_or_pname() {
    skip_ws();
    if (peek() == '<') return iriref();
    if (pname_ahead()) return pname();
    fail("IRI");
  }

  std::string string_body() {
    skip_ws();
    char q = peek();
    if (q != '"' && q != '\'') fail("string literal");
    ++i_;
    std::string out;
    for (;;) {
      if (at_end()) fail("closing quote");
      char c = s_[i_++];
      if (c == q) break;
      if (c == '\\') {
        char e = peek();
        ++i_;
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          default: fail("valid escape");
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string literal() {
    std::string lex = string_body();
    if (peek() == '@') {
      std::size_t start = ++i_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-')) ++i_;
      if (i_ == start) fail("language tag");
      return make_literal(lex, s_.substr(start, i_ - start));
    }
    if (peek() == '^' && peek(1) == '^') {
      i_ += 2;
      std::string dt = iri_or_pname();
      return make_literal(lex, {}, std::string_view(dt).substr(1, dt.size() - 2));
    }
    return make_literal(lex);
  }

  bool number_ahead() {
    skip_ws();
    char c = peek();
    if (c == '+' || c == '-') c = peek(1);
    return std::isdigit(static_cast<unsigned char>(c));
  }

  std::string number() {
    skip_ws();
    std::size_t start = i_;
    if (peek() == '+' || peek() == '-') ++i_;
    bool dot = false, exp = false;
    while (!at_end()) {
      char c = s_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++i_;
      } else if (c == '.' && !dot && !exp && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        dot = true;
        ++i_;
      } else if ((c == 'e' || c == 'E') && !exp) {
        exp = true;
        ++i_;
        if (peek() == '+' || peek() == '-') ++i_;
      } else {
        break;
      }
    }
    std::string lex(s_.substr(start, i_ - start));
    std::string dt = std::string(kXsd) + (exp ? "double" : dot ? "decimal" : "integer");
    return make_literal(lex, {}, dt);
  }

  // Constant in pattern or filter position; `allow_var` accepts variables.
  PatternTerm term(bool allow_var, const char* what) {
    skip_ws();
    char c = peek();
    if (c == '?' || c == '$') {
      if (!allow_var) fail(what);
      return PatternTerm::var(note_var(variable()));
    }
    if (c == '<') return PatternTerm::constant(iriref());
    if (c == '"' || c == '\'') return PatternTerm::constant(literal());
    if (c == '[' || (c == '_' && peek(1) == ':')) throw UnsupportedFeature("blank node");
    if (c == '(') throw UnsupportedFeature("RDF collection");
    if (number_ahead()) return PatternTerm::constant(number());
    if (keyword_ahead("TRUE") || keyword_ahead("FALSE")) {
      std::string v = keyword_ahead("TRUE") ? "true" : "false";
      i_ += v.size();
      return PatternTerm::constant(make_literal(v, {}, std::string(kXsd) + "boolean"));
    }
    if (pname_ahead()) return PatternTerm::constant(pname());
    fail(what);
  }

  const std::string& note_var(const std::string& v) {
    if (std::find(q_.variables.begin(), q_.variables.end(), v) == q_.variables.end())
      q_.variables.push_back(v);
    return v;
  }

  // ---- grammar ----
  void prologue() {
    for (;;) {
      if (accept_keyword("PREFIX")) {
        skip_ws();
        std::size_t start = i_;
        while (!at_end() && name_char(s_[i_])) ++i_;
        std::string prefix(s_.substr(start, i_ - start));
        if (peek() != ':') fail("':' after prefix name");
        ++i_;
        std::string iri = iriref();
        prefixes_[prefix] = iri.substr(1, iri.size() - 2);
      } else if (accept_keyword("BASE")) {
        iriref();
      } else {
        return;
      }
    }
  }

  std::int32_t add(SemanticsTree::Node n) {
    q_.semantics.nodes.push_back(n);
    return static_cast<std::int32_t>(q_.semantics.nodes.size() - 1);
  }

  std::int32_t binary(Kind k, std::int32_t l, std::int32_t r, std::uint32_t g, bool bgp = false) {
    SemanticsTree::Node n;
    n.kind = k;
    n.left = l;
    n.right = r;
    n.group = g;
    n.bgp = bgp;
    return add(n);
  }

  bool unsupported_keyword_ahead() {
    for (const char* k : {"MINUS", "GRAPH", "SERVICE", "BIND", "VALUES", "SELECT"})
      if (keyword_ahead(k)) return true;
    return false;
  }

  std::int32_t group() {
    expect('{');
    const std::uint32_t g = next_group_++;
    std::int32_t acc = -1;
    std::vector<std::int32_t> run;
    std::vector<std::uint32_t> filters;

    auto join = [&](std::int32_t x) { acc = acc < 0 ? x : binary(Kind::And, acc, x, g); };
    auto flush = [&] {
      if (run.empty()) return;
      std::int32_t r = run[0];
      for (std::size_t k = 1; k < run.size(); ++k) r = binary(Kind::And, r, run[k], g, true);
      run.clear();
      join(r);
    };

    for (;;) {
      skip_ws();
      if (accept('}')) break;
      if (at_end()) fail("'}'");
      if (peek() == '{') {
        flush();
        std::int32_t u = group();
        while (accept_keyword("UNION")) u = binary(Kind::Or, u, group(), g);
        join(u);
        accept('.');
      } else if (accept_keyword("OPTIONAL")) {
        flush();
        if (acc < 0) throw UnsupportedFeature("OPTIONAL without a preceding pattern");
        std::int32_t rhs = group();
        acc = binary(Kind::Opt, acc, rhs, g);
        accept('.');
      } else if (accept_keyword("FILTER")) {
        constraint(filters);
        accept('.');
      } else if (unsupported_keyword_ahead()) {
        std::string w = upper(peek_word());
        throw UnsupportedFeature(w == "SELECT" ? "subquery" : w);
      } else {
        triples(run, g);
      }
    }
    flush();
    if (acc < 0) throw UnsupportedFeature("empty group pattern");
    for (std::uint32_t f : filters) {
      SemanticsTree::Node n;
      n.kind = Kind::Filter;
      n.left = acc;
      n.index = f;
      n.group = g;
      acc = add(n);
    }
    return acc;
  }

  void check_path_modifier() {
    skip_ws();
    char c = peek();
    if (c == '/' || c == '|' || c == '*' || c == '+' ||
        (c == '?' && !name_char(peek(1))))
      throw UnsupportedFeature("property path");
  }

  void triples(std::vector<std::int32_t>& run, std::uint32_t g) {
    PatternTerm subj = term(true, "subject");
    for (;;) {
      skip_ws();
      if (peek() == '^' || peek() == '!' || peek() == '(') throw UnsupportedFeature("property path");
      PatternTerm pred;
      if (keyword_ahead("A")) {
        i_ += 1;
        pred = PatternTerm::constant(kRdfType);
      } else {
        skip_ws();
        if (peek() == '"' || peek() == '\'' || number_ahead()) fail("predicate");
        pred = term(true, "predicate");
      }
      check_path_modifier();
      for (;;) {
        PatternTerm obj = term(true, "object");
        q_.patterns.push_back({subj, pred, obj});
        SemanticsTree::Node n;
        n.kind = Kind::Pattern;
        n.index = static_cast<std::uint32_t>(q_.patterns.size() - 1);
        n.group = g;
        run.push_back(add(n));
        if (!accept(',')) break;
      }
      if (!accept(';')) break;
      skip_ws();
      if (peek() == '.' || peek() == '}') break;
    }
    skip_ws();
    if (peek() == '.') ++i_;
    else if (peek() != '}' && peek() != '{' && !keyword_ahead("FILTER") && !keyword_ahead("OPTIONAL") &&
             !unsupported_keyword_ahead())
      fail("'.'");
  }

  // ---- filters ----
  void constraint(std::vector<std::uint32_t>& out) {
    skip_ws();
    if (keyword_ahead("NOT") || keyword_ahead("EXISTS")) throw UnsupportedFeature("FILTER EXISTS");
    if (peek() == '(') {
      expression(out);
      return;
    }
    auto w = upper(peek_word());
    if (w == "REGEX") {
      out.push_back(regex());
      return;
    }
    if (w.empty()) fail("filter constraint");
    throw UnsupportedFeature("filter function " + w);
  }

  void expression(std::vector<std::uint32_t>& out) {
    expect('(');
    conjunction(out);
    skip_ws();
    if (peek() == '|' && peek(1) == '|') throw UnsupportedFeature("filter disjunction");
    expect(')');
  }

  void conjunction(std::vector<std::uint32_t>& out) {
    for (;;) {
      skip_ws();
      if (peek() == '!' && peek(1) != '=') throw UnsupportedFeature("filter negation");
      if (peek() == '(') {
        expression(out);
      } else if (upper(peek_word()) == "REGEX") {
        out.push_back(regex());
      } else {
        out.push_back(comparison());
      }
      skip_ws();
      if (peek() == '&' && peek(1) == '&') {
        i_ += 2;
        continue;
      }
      if (peek() == '|' && peek(1) == '|') throw UnsupportedFeature("filter disjunction");
      return;
    }
  }

  std::uint32_t push_filter(FilterExpr f) {
    note_var(f.var);
    q_.filters.push_back(std::move(f));
    return static_cast<std::uint32_t>(q_.filters.size() - 1);
  }

  // ?v, str(?v) or a cast such as xsd:integer(?v).
  std::optional<std::string> var_operand() {
    skip_ws();
    if (peek() == '?' || peek() == '$') return variable();
    std::size_t save = i_;
    if (upper(peek_word()) == "STR") {
      i_ += 3;
      if (accept('(')) {
        auto v = variable();
        expect(')');
        return v;
      }
      i_ = save;
    }
    if (pname_ahead() || peek() == '<') {
      std::string fn = iri_or_pname();
      if (accept('(')) {
        if (fn.rfind(std::string("<") + kXsd, 0) != 0) throw UnsupportedFeature("filter function " + fn);
        auto v = variable();
        expect(')');
        return v;
      }
      i_ = save;
    }
    return std::nullopt;
  }

  std::uint32_t regex() {
    skip_ws();
    i_ += 5;
    expect('(');
    auto v = var_operand();
    if (!v) fail("variable in regex");
    expect(',');
    FilterExpr f;
    f.var = *v;
    f.op = CompareOp::Regex;
    f.operand = string_body();
    if (accept(',')) f.flags = string_body();
    expect(')');
    return push_filter(std::move(f));
  }

  CompareOp compare_op() {
    skip_ws();
    char c = peek(), d = peek(1);
    if (c == '=') return ++i_, CompareOp::Eq;
    if (c == '!' && d == '=') return i_ += 2, CompareOp::Ne;
    if (c == '<' && d == '=') return i_ += 2, CompareOp::Le;
    if (c == '>' && d == '=') return i_ += 2, CompareOp::Ge;
    if (c == '<') return ++i_, CompareOp::Lt;
    if (c == '>') return ++i_, CompareOp::Gt;
    fail("comparison operator");
  }

  std::uint32_t comparison() {
    auto lhs_var = var_operand();
    std::string lhs_const;
    if (!lhs_var) lhs_const = term(false, "filter operand").text;
    CompareOp op = compare_op();
    auto rhs_var = var_operand();
    if (lhs_var && rhs_var) throw UnsupportedFeature("variable-to-variable comparison");
    FilterExpr f;
    if (lhs_var) {
      f.var = *lhs_var;
      f.op = op;
      f.operand = term(false, "constant operand").text;
    } else {
      if (!rhs_var) fail("variable operand");
      f.var = *rhs_var;
      f.op = flip(op);
      f.operand = lhs_const;
    }
    return push_filter(std::move(f));
  }

  // ---- solution modifiers ----
  void modifiers() {
    if (keyword_ahead("GROUP")) throw UnsupportedFeature("GROUP BY");
    if (keyword_ahead("HAVING")) throw UnsupportedFeature("HAVING");
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      for (;;) {
        skip_ws();
        if (peek() == '?' || peek() == '$') {
          q_.modifiers.order_by.push_back({variable(), false});
        } else if (keyword_ahead("ASC") || keyword_ahead("DESC")) {
          bool desc = keyword_ahead("DESC");
          i_ += desc ? 4 : 3;
          expect('(');
          skip_ws();
          if (peek() != '?' && peek() != '$') throw UnsupportedFeature("order expression");
          q_.modifiers.order_by.push_back({variable(), desc});
          expect(')');
        } else if (peek() == '(') {
          throw UnsupportedFeature("order expression");
        } else {
          break;
        }
      }
      if (q_.modifiers.order_by.empty()) fail("order condition");
    }
    for (int k = 0; k < 2; ++k) {
      if (!q_.modifiers.limit && accept_keyword("LIMIT")) q_.modifiers.limit = integer();
      else if (!q_.modifiers.offset && accept_keyword("OFFSET")) q_.modifiers.offset = integer();
    }
  }

  std::uint64_t integer() {
    skip_ws();
    std::size_t start = i_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == start) fail("integer");
    return std::stoull(std::string(s_.substr(start, i_ - start)));
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::map<std::string, std::string> prefixes_;
  std::uint32_t next_group_ = 0;
  Query q_;
};

}  // namespace

Query parse_query(std::string_view text) { return Parser(text).run(); }

}  // namespace rosie
