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
#include <cctype>
#include <fstream>
#include <istream>

#include "rosie/store.hpp"

namespace rosie {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t lineno) : s_(line), line_(lineno) {}

  // Returns false for blank and comment lines.
  bool parse(std::string& subj, std::string& pred, std::string& obj) {
    skip_ws();
    if (at_end() || peek() == '#') return false;
    subj = peek() == '<' ? iri() : peek() == '_' ? blank() : fail<std::string>("expected subject");
    skip_ws();
    pred = peek() == '<' ? iri() : fail<std::string>("expected predicate IRI");
    skip_ws();
    if (peek() == '<') obj = iri();
    else if (peek() == '_') obj = blank();
    else if (peek() == '"') obj = literal();
    else fail<int>("expected object");
    skip_ws();
    if (peek() != '.') fail<int>("expected '.'");
    ++i_;
    skip_ws();
    if (!at_end() && peek() != '#') fail<int>("trailing characters after '.'");
    return true;
  }

 private:
  template <class T>
  [[noreturn]] T fail(const std::string& why) {
    throw ParseError(line_, why + " at column " + std::to_string(i_ + 1));
  }

  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[i_]; }
  void skip_ws() {
    while (!at_end() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\r')) ++i_;
  }

  std::string iri() {
    std::size_t start = i_++;
    while (!at_end() && s_[i_] != '>') {
      char c = s_[i_];
      if (c == ' ' || c == '<' || c == '"') fail<int>("invalid character in IRI");
      ++i_;
    }
    if (at_end()) fail<int>("unterminated IRI");
    ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  std::string blank() {
    if (s_.substr(i_, 2) != "_:") fail<int>("expected blank node");
    std::size_t start = i_;
    i_ += 2;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                         s_[i_] == '-' || s_[i_] == '.'))
      ++i_;
    // A trailing '.' belongs to the statement terminator.
    while (i_ > start + 2 && s_[i_ - 1] == '.') --i_;
    if (i_ == start + 2) fail<int>("empty blank node label");
    return std::string(s_.substr(start, i_ - start));
  }

  std::uint32_t hex(std::size_t n) {
    if (i_ + n > s_.size()) fail<int>("truncated unicode escape");
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < n; ++k) {
      char c = s_[i_++];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= c - '0';
      else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
      else fail<int>("bad hex digit");
    }
    return v;
  }

  std::string literal() {
    ++i_;
    std::string lex;
    for (;;) {
      if (at_end()) fail<int>("unterminated literal");
      char c = s_[i_++];
      if (c == '"') break;
      if (c != '\\') {
        lex += c;
        continue;
      }
      if (at_end()) fail<int>("dangling escape");
      char e = s_[i_++];
      switch (e) {
        case 't': lex += '\t'; break;
        case 'b': lex += '\b'; break;
        case 'n': lex += '\n'; break;
        case 'r': lex += '\r'; break;
        case 'f': lex += '\f'; break;
        case '"': lex += '"'; break;
        case '\'': lex += '\''; break;
        case '\\': lex += '\\'; break;
        case 'u': append_utf8(lex, hex(4)); break;
        case 'U': append_utf8(lex, hex(8)); break;
        default: fail<int>("unknown escape");
      }
    }
    if (peek() == '@') {
      std::size_t start = ++i_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-')) ++i_;
      if (i_ == start) fail<int>("empty language tag");
      return make_literal(lex, s_.substr(start, i_ - start));
    }
    if (s_.substr(i_, 2) == "^^") {
      i_ += 2;
      if (peek() != '<') fail<int>("expected datatype IRI");
      std::string dt = iri();
      return make_literal(lex, {}, std::string_view(dt).substr(1, dt.size() - 2));
    }
    return make_literal(lex);
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t i_ = 0;
};

}  // namespace

Dataset load_ntriples(std::istream& in) {
  TermDictionary dict;
  std::vector<Triple> triples;
  std::string line, s, p, o;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!LineParser(line, lineno).parse(s, p, o)) continue;
    triples.push_back({dict.intern(s), dict.intern(p), dict.intern(o)});
  }
  if (in.bad()) throw IoError("read failure while loading triples");
  return Dataset(std::move(dict), std::move(triples));
}

Dataset load_ntriples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_ntriples(in);
}

}  // namespace rosie
