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
#include "rosie/store.hpp"

#include <algorithm>
#include <array>

namespace rosie {

ParseError::ParseError(std::size_t line, std::string reason)
    : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(std::move(reason)) {}

TermId TermDictionary::intern(std::string_view term) {
  std::string key(term);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<TermId> TermDictionary::find(std::string_view term) const {
  auto it = ids_.find(std::string(term));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Stats Stats::from_triples(std::span<const Triple> triples, std::size_t term_count) {
  Stats st;
  st.size_ = triples.size();
  for (auto& h : st.hist_) h.assign(term_count, 0);
  for (const Triple& t : triples) {
    ++st.hist_[0][t.s];
    ++st.hist_[1][t.p];
    ++st.hist_[2][t.o];
  }
  return st;
}

std::uint64_t Stats::count(TermId term, Role role) const {
  const auto& h = hist_[static_cast<int>(role)];
  return term < h.size() ? h[term] : 0;
}

Relation::Relation(std::vector<std::string> schema) : schema_(std::move(schema)) {}

int Relation::column(std::string_view var) const {
  for (std::size_t i = 0; i < schema_.size(); ++i)
    if (schema_[i] == var) return static_cast<int>(i);
  return -1;
}

void Relation::add_row(std::span<const TermId> values) {
  cells_.insert(cells_.end(), values.begin(), values.end());
  ++rows_;
}

struct Dataset::Registry {
  std::mutex mu;
  std::map<RelationId, std::shared_ptr<const Relation>> relations;
  std::uint32_t next = 1;
};

namespace {

using Order = std::array<Role, 3>;
constexpr Order kSpo{Role::S, Role::P, Role::O};
constexpr Order kPos{Role::P, Role::O, Role::S};
constexpr Order kOsp{Role::O, Role::S, Role::P};

std::vector<Triple> sorted_by(std::vector<Triple> v, const Order& ord) {
  std::sort(v.begin(), v.end(), [&](const Triple& a, const Triple& b) {
    for (Role r : ord)
      if (a.at(r) != b.at(r)) return a.at(r) < b.at(r);
    return false;
  });
  return v;
}

}  // namespace

Dataset::Dataset() : registry_(std::make_unique<Registry>()) {}

Dataset::Dataset(TermDictionary dict, std::vector<Triple> triples)
    : dict_(std::move(dict)), registry_(std::make_unique<Registry>()) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  pos_ = sorted_by(triples, kPos);
  osp_ = sorted_by(triples, kOsp);
  spo_ = std::move(triples);
  stats_ = Stats::from_triples(spo_, dict_.size());
}

Dataset::Dataset(Dataset&&) noexcept = default;
Dataset& Dataset::operator=(Dataset&&) noexcept = default;
Dataset::~Dataset() = default;

bool Dataset::contains(const Triple& t) const {
  return std::binary_search(spo_.begin(), spo_.end(), t);
}

RelationId Dataset::register_intermediate(Relation r) const {
  std::lock_guard lock(registry_->mu);
  RelationId id{registry_->next++};
  registry_->relations.emplace(id, std::make_shared<const Relation>(std::move(r)));
  return id;
}

std::shared_ptr<const Relation> Dataset::intermediate(RelationId id) const {
  std::lock_guard lock(registry_->mu);
  auto it = registry_->relations.find(id);
  if (it == registry_->relations.end()) throw Error("unknown intermediate relation " + std::to_string(id.value));
  return it->second;
}

void Dataset::release_intermediate(RelationId id) const {
  std::lock_guard lock(registry_->mu);
  registry_->relations.erase(id);
}

std::uint64_t stats_lookup(const Dataset& d, TermId term, Role role) {
  return d.stats().count(term, role);
}

Relation scan(const Dataset& d, const TriplePattern& tp) {
  Relation out(tp.variables());
  std::array<std::optional<TermId>, 3> bound;
  for (Role r : kRoles) {
    const PatternTerm& t = tp.at(r);
    if (t.is_var()) continue;
    auto id = d.lookup(t.text);
    if (!id) return out;
    bound[static_cast<int>(r)] = *id;
  }
  const bool bs = bound[0].has_value(), bp = bound[1].has_value(), bo = bound[2].has_value();

  std::span<const Triple> perm = d.spo();
  const Order* ord = &kSpo;
  if (bs && !bp && bo) {
    perm = d.osp(), ord = &kOsp;
  } else if (!bs && bp) {
    perm = d.pos(), ord = &kPos;
  } else if (!bs && !bp && bo) {
    perm = d.osp(), ord = &kOsp;
  }
  std::size_t prefix = 0;
  std::array<TermId, 3> key{};
  for (Role r : *ord) {
    if (!bound[static_cast<int>(r)]) break;
    key[prefix++] = *bound[static_cast<int>(r)];
  }
  auto lo_cmp = [&](const Triple& t, int) {
    for (std::size_t i = 0; i < prefix; ++i) {
      TermId v = t.at((*ord)[i]);
      if (v != key[i]) return v < key[i];
    }
    return false;
  };
  auto hi_cmp = [&](int, const Triple& t) {
    for (std::size_t i = 0; i < prefix; ++i) {
      TermId v = t.at((*ord)[i]);
      if (v != key[i]) return key[i] < v;
    }
    return false;
  };
  auto first = std::lower_bound(perm.begin(), perm.end(), 0, lo_cmp);
  auto last = std::upper_bound(first, perm.end(), 0, hi_cmp);

  // Column of each position, or -1 for constants.
  std::array<int, 3> col{-1, -1, -1};
  for (Role r : kRoles)
    if (tp.at(r).is_var()) col[static_cast<int>(r)] = out.column(tp.at(r).text);

  std::vector<TermId> row(out.arity());
  out.reserve(static_cast<std::size_t>(last - first));
  for (auto it = first; it != last; ++it) {
    const Triple& t = *it;
    bool ok = true;
    std::fill(row.begin(), row.end(), kUnbound);
    for (Role r : kRoles) {
      int i = static_cast<int>(r);
      if (bound[i]) {
        if (t.at(r) != *bound[i]) ok = false;
        continue;
      }
      TermId& cell = row[col[i]];
      if (cell != kUnbound && cell != t.at(r)) ok = false;
      cell = t.at(r);
    }
    if (ok) out.add_row(row);
  }
  return out;
}

}  // namespace rosie
