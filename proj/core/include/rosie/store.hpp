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

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rosie/pattern.hpp"

namespace rosie {

using TermId = std::uint32_t;

/// Cell value of a variable that is not bound in a row.
inline constexpr TermId kUnbound = std::numeric_limits<TermId>::max();

struct Triple {
  TermId s = 0, p = 0, o = 0;

  TermId at(Role r) const { return r == Role::S ? s : r == Role::P ? p : o; }
  auto operator<=>(const Triple&) const = default;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string reason);
  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class SnapshotFormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Bijection between term strings and dense ids. Ids are assigned in
/// first-seen order starting at 0.
class TermDictionary {
 public:
  TermId intern(std::string_view term);
  std::optional<TermId> find(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_.at(id); }
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> ids_;
};

/// Exact per-position histograms.
class Stats {
 public:
  static Stats from_triples(std::span<const Triple> triples, std::size_t term_count);

  std::uint64_t size() const { return size_; }
  /// Triples whose `role` position holds `term`; 0 for unknown ids.
  std::uint64_t count(TermId term, Role role) const;

 private:
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> hist_[3];
};

struct RelationId {
  std::uint32_t value = 0;
  auto operator<=>(const RelationId&) const = default;
};

/// Bag of rows over a fixed variable schema, stored row-major.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::vector<std::string> schema);

  const std::vector<std::string>& schema() const { return schema_; }
  std::size_t arity() const { return schema_.size(); }
  std::size_t size() const { return rows_; }
  bool empty() const { return rows_ == 0; }

  /// Column index of `var`, or -1.
  int column(std::string_view var) const;

  std::span<const TermId> row(std::size_t i) const {
    return {cells_.data() + i * schema_.size(), schema_.size()};
  }
  void add_row(std::span<const TermId> values);
  void reserve(std::size_t rows) { cells_.reserve(rows * schema_.size()); }

 private:
  std::vector<std::string> schema_;
  std::vector<TermId> cells_;
  std::size_t rows_ = 0;
};

/// Immutable set of triples with three sorted permutations (SPO, POS, OSP).
/// The only mutation after construction is the intermediate registry, which
/// is internally synchronized.
class Dataset {
 public:
  Dataset();
  Dataset(TermDictionary dict, std::vector<Triple> triples);
  Dataset(Dataset&&) noexcept;
  Dataset& operator=(Dataset&&) noexcept;
  ~Dataset();

  const TermDictionary& dictionary() const { return dict_; }
  const Stats& stats() const { return stats_; }
  std::size_t size() const { return spo_.size(); }

  std::span<const Triple> spo() const { return spo_; }
  std::span<const Triple> pos() const { return pos_; }
  std::span<const Triple> osp() const { return osp_; }

  std::optional<TermId> lookup(std::string_view term) const { return dict_.find(term); }
  bool contains(const Triple& t) const;

  RelationId register_intermediate(Relation r) const;
  std::shared_ptr<const Relation> intermediate(RelationId id) const;
  void release_intermediate(RelationId id) const;

 private:
  struct Registry;

  TermDictionary dict_;
  std::vector<Triple> spo_, pos_, osp_;
  Stats stats_;
  std::unique_ptr<Registry> registry_;
};

/// Parses N-Triples. Duplicate triples are stored once.
Dataset load_ntriples(std::istream& in);
Dataset load_ntriples_file(const std::string& path);

/// All bindings of the variables of `tp` (schema = tp.variables()).
/// Repeated variables must bind the same term.
Relation scan(const Dataset& d, const TriplePattern& tp);

std::uint64_t stats_lookup(const Dataset& d, TermId term, Role role);

void snapshot_save(const Dataset& d, std::ostream& out);
Dataset snapshot_load(std::istream& in);
void snapshot_save_file(const Dataset& d, const std::string& path);
Dataset snapshot_load_file(const std::string& path);

}  // namespace rosie
