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
#include "rosie/executor.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "rosie/estimator.hpp"

namespace rosie {

Timeout::Timeout(std::chrono::milliseconds budget)
    : Error("query exceeded its time budget of " + std::to_string(budget.count()) + " ms"), budget_(budget) {}

Deadline::Deadline(std::chrono::milliseconds budget)
    : at_(std::chrono::steady_clock::now() + budget), budget_(budget) {}

void Deadline::check() const {
  if (at_ && std::chrono::steady_clock::now() > *at_) throw Timeout(budget_);
}

const char* physical_kind_name(PhysicalOp::Kind k) {
  static constexpr const char* kNames[] = {"Scan",   "Fetch",  "HashJoin", "LeftOuterJoin", "Union",
                                           "Filter", "Project", "Distinct", "Sort",          "Slice"};
  return kNames[static_cast<int>(k)];
}

namespace {

using Row = std::vector<TermId>;
using PK = PhysicalOp::Kind;

struct RowHash {
  std::size_t operator()(const Row& r) const {
    std::size_t h = 1469598103934665603ull;
    for (TermId t : r) h = (h ^ t) * 1099511628211ull;
    return h;
  }
};

std::vector<std::string> merged_schema(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& v : b)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

std::vector<std::string> sorted_union(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<std::string> sorted_intersection(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PhysicalOp lower(const CsNode& n, const QueryState& s, const Dataset& d) {
  PhysicalOp op;
  switch (n.kind) {
    case CsNode::Kind::Leaf:
      if (n.leaf.kind == LeafRef::Kind::Pattern) {
        op.kind = PK::Scan;
        op.pattern = s.query->patterns.at(n.leaf.index);
        op.schema = op.pattern.variables();
        op.certain = op.schema;
        std::sort(op.certain.begin(), op.certain.end());
        op.estimate = estimate_tp(op.pattern, d);
      } else {
        const auto& m = s.materialized.at(n.leaf.index);
        op.kind = PK::Fetch;
        op.relation = m.relation;
        op.schema = m.schema;
        op.certain = m.certain;
        std::sort(op.certain.begin(), op.certain.end());
        op.estimate = m.cardinality;
      }
      return op;
    case CsNode::Kind::Filter: {
      op.kind = PK::Filter;
      op.filter = s.query->filters.at(n.filter);
      op.children.push_back(lower(n.children[0], s, d));
      op.schema = op.children[0].schema;
      op.certain = op.children[0].certain;
      // A passing row always binds the constrained variable.
      if (std::find(op.schema.begin(), op.schema.end(), op.filter.var) != op.schema.end())
        op.certain = sorted_union(op.certain, {op.filter.var});
      op.estimate = op.children[0].estimate * filter_selectivity(op.filter.op);
      return op;
    }
    default:
      break;
  }
  PhysicalOp l = lower(n.children[0], s, d);
  PhysicalOp r = lower(n.children[1], s, d);
  op.schema = merged_schema(l.schema, r.schema);
  switch (n.kind) {
    case CsNode::Kind::And:
      op.kind = PK::HashJoin;
      op.certain = sorted_union(l.certain, r.certain);
      op.estimate = estimate_join(l.estimate, r.estimate, JoinType::SS);
      op.build_left = l.estimate < r.estimate;
      break;
    case CsNode::Kind::Opt:
      op.kind = PK::LeftOuterJoin;
      op.certain = l.certain;
      op.estimate = std::max(l.estimate, estimate_join(l.estimate, r.estimate, JoinType::SS));
      break;
    default:
      op.kind = PK::Union;
      op.certain = sorted_intersection(l.certain, r.certain);
      op.estimate = l.estimate + r.estimate;
      break;
  }
  op.children.push_back(std::move(l));
  op.children.push_back(std::move(r));
  return op;
}

// ---- iterators ----

class Iter {
 public:
  explicit Iter(const Deadline& dl) : dl_(dl) {}
  virtual ~Iter() = default;
  virtual void open() = 0;
  virtual bool next(Row& out) = 0;

 protected:
  void tick() {
    if ((++ticks_ & 0xFFF) == 0) dl_.check();
  }
  const Deadline& dl_;

 private:
  std::uint64_t ticks_ = 0;
};

std::unique_ptr<Iter> make_iter(const PhysicalOp& op, const Dataset& d, const Deadline& dl);

class RelationIter : public Iter {
 public:
  RelationIter(std::shared_ptr<const Relation> rel, const Deadline& dl) : Iter(dl), rel_(std::move(rel)) {}
  void open() override { pos_ = 0; }
  bool next(Row& out) override {
    if (pos_ >= rel_->size()) return false;
    tick();
    auto r = rel_->row(pos_++);
    out.assign(r.begin(), r.end());
    return true;
  }

 private:
  std::shared_ptr<const Relation> rel_;
  std::size_t pos_ = 0;
};

class ScanIter : public RelationIter {
 public:
  ScanIter(const PhysicalOp& op, const Dataset& d, const Deadline& dl)
      : RelationIter(std::make_shared<const Relation>(scan(d, op.pattern)), dl) {}
};

// Column mapping of an input schema into an output schema.
std::vector<int> positions(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  std::vector<int> out;
  for (const auto& v : to) {
    auto it = std::find(from.begin(), from.end(), v);
    out.push_back(it == from.end() ? -1 : static_cast<int>(it - from.begin()));
  }
  return out;
}

// Shared by hash and left outer joins: rows are compatible when every shared
// variable is equal or unbound on one side.
class JoinBase : public Iter {
 public:
  JoinBase(const PhysicalOp& op, const Dataset& d, const Deadline& dl)
      : Iter(dl), left_(make_iter(op.children[0], d, dl)), right_(make_iter(op.children[1], d, dl)) {
    const auto& ls = op.children[0].schema;
    const auto& rs = op.children[1].schema;
    lpos_ = positions(ls, op.schema);
    rpos_ = positions(rs, op.schema);
    for (std::size_t i = 0; i < ls.size(); ++i) {
      auto it = std::find(rs.begin(), rs.end(), ls[i]);
      if (it == rs.end()) continue;
      auto j = static_cast<int>(it - rs.begin());
      bool lc = std::binary_search(op.children[0].certain.begin(), op.children[0].certain.end(), ls[i]);
      bool rc = std::binary_search(op.children[1].certain.begin(), op.children[1].certain.end(), ls[i]);
      if (lc && rc) {
        lkey_.push_back(static_cast<int>(i));
        rkey_.push_back(j);
      } else {
        lcheck_.push_back(static_cast<int>(i));
        rcheck_.push_back(j);
      }
    }
    width_ = op.schema.size();
  }

  static Row key(const Row& r, const std::vector<int>& cols) {
    Row k;
    k.reserve(cols.size());
    for (int c : cols) k.push_back(r[static_cast<std::size_t>(c)]);
    return k;
  }

  bool compatible(const Row& l, const Row& r) const {
    for (std::size_t i = 0; i < lcheck_.size(); ++i) {
      TermId a = l[static_cast<std::size_t>(lcheck_[i])], b = r[static_cast<std::size_t>(rcheck_[i])];
      if (a != kUnbound && b != kUnbound && a != b) return false;
    }
    return true;
  }

  void merge(const Row& l, const Row* r, Row& out) const {
    out.assign(width_, kUnbound);
    for (std::size_t k = 0; k < width_; ++k) {
      if (lpos_[k] >= 0) out[k] = l[static_cast<std::size_t>(lpos_[k])];
      if (out[k] == kUnbound && r && rpos_[k] >= 0) out[k] = (*r)[static_cast<std::size_t>(rpos_[k])];
    }
  }

  std::unique_ptr<Iter> left_, right_;
  std::vector<int> lpos_, rpos_, lkey_, rkey_, lcheck_, rcheck_;
  std::size_t width_ = 0;
};

class HashJoinIter : public JoinBase {
 public:
  HashJoinIter(const PhysicalOp& op, const Dataset& d, const Deadline& dl)
      : JoinBase(op, d, dl), build_left_(op.build_left) {}

  void open() override {
    Iter& build = build_left_ ? *left_ : *right_;
    build.open();
    const auto& cols = build_left_ ? lkey_ : rkey_;
    Row r;
    while (build.next(r)) {
      tick();
      table_[key(r, cols)].push_back(rows_.size());
      rows_.push_back(r);
    }
    (build_left_ ? right_ : left_)->open();
    matches_ = nullptr;
  }

  bool next(Row& out) override {
    Iter& probe = build_left_ ? *right_ : *left_;
    const auto& pcols = build_left_ ? rkey_ : lkey_;
    for (;;) {
      while (matches_ && mpos_ < matches_->size()) {
        tick();
        const Row& b = rows_[(*matches_)[mpos_++]];
        const Row& l = build_left_ ? b : probe_row_;
        const Row& r = build_left_ ? probe_row_ : b;
        if (!compatible(l, r)) continue;
        merge(l, &r, out);
        return true;
      }
      if (!probe.next(probe_row_)) return false;
      auto it = table_.find(key(probe_row_, pcols));
      matches_ = it == table_.end() ? nullptr : &it->second;
      mpos_ = 0;
    }
  }

 private:
  bool build_left_;
  std::vector<Row> rows_;
  std::unordered_map<Row, std::vector<std::size_t>, RowHash> table_;
  const std::vector<std::size_t>* matches_ = nullptr;
  std::size_t mpos_ = 0;
  Row probe_row_;
};

class LeftOuterJoinIter : public JoinBase {
 public:
  using JoinBase::JoinBase;

  void open() override {
    right_->open();
    Row r;
    while (right_->next(r)) {
      tick();
      table_[key(r, rkey_)].push_back(rows_.size());
      rows_.push_back(r);
    }
    left_->open();
    matches_ = nullptr;
  }

  bool next(Row& out) override {
    for (;;) {
      while (matches_ && mpos_ < matches_->size()) {
        tick();
        const Row& r = rows_[(*matches_)[mpos_++]];
        if (!compatible(left_row_, r)) continue;
        matched_ = true;
        merge(left_row_, &r, out);
        return true;
      }
      if (has_left_ && !matched_) {
        has_left_ = false;
        merge(left_row_, nullptr, out);
        return true;
      }
      if (!left_->next(left_row_)) return false;
      has_left_ = true;
      matched_ = false;
      auto it = table_.find(key(left_row_, lkey_));
      matches_ = it == table_.end() ? nullptr : &it->second;
      mpos_ = 0;
    }
  }

 private:
  std::vector<Row> rows_;
  std::unordered_map<Row, std::vector<std::size_t>, RowHash> table_;
  const std::vector<std::size_t>* matches_ = nullptr;
  std::size_t mpos_ = 0;
  Row left_row_;
  bool has_left_ = false;
  bool matched_ = false;
};

// Pads each input row into the output schema.
class UnionIter : public Iter {
 public:
  UnionIter(const PhysicalOp& op, const Dataset& d, const Deadline& dl) : Iter(dl) {
    for (const auto& c : op.children) {
      inputs_.push_back(make_iter(c, d, dl));
      maps_.push_back(positions(c.schema, op.schema));
    }
  }
  void open() override {
    cur_ = 0;
    if (!inputs_.empty()) inputs_[0]->open();
  }
  bool next(Row& out) override {
    while (cur_ < inputs_.size()) {
      if (inputs_[cur_]->next(in_)) {
        tick();
        const auto& m = maps_[cur_];
        out.assign(m.size(), kUnbound);
        for (std::size_t k = 0; k < m.size(); ++k)
          if (m[k] >= 0) out[k] = in_[static_cast<std::size_t>(m[k])];
        return true;
      }
      if (++cur_ < inputs_.size()) inputs_[cur_]->open();
    }
    return false;
  }

 private:
  std::vector<std::unique_ptr<Iter>> inputs_;
  std::vector<std::vector<int>> maps_;
  std::size_t cur_ = 0;
  Row in_;
};

class FilterIter : public Iter {
 public:
  FilterIter(const PhysicalOp& op, const Dataset& d, const Deadline& dl)
      : Iter(dl), child_(make_iter(op.children[0], d, dl)), filter_(op.filter), dict_(d.dictionary()) {
    auto it = std::find(op.schema.begin(), op.schema.end(), filter_.var);
    col_ = it == op.schema.end() ? -1 : static_cast<int>(it - op.schema.begin());
  }
  void open() override { child_->open(); }
  bool next(Row& out) override {
    while (child_->next(out)) {
      tick();
      if (col_ < 0) continue;
      TermId t = out[static_cast<std::size_t>(col_)];
      if (t == kUnbound) continue;
      auto it = cache_.find(t);
      if (it == cache_.end()) it = cache_.emplace(t, eval_filter(filter_, dict_.term(t))).first;
      if (it->second) return true;
    }
    return false;
  }

 private:
  std::unique_ptr<Iter> child_;
  FilterExpr filter_;
  const TermDictionary& dict_;
  int col_;
  std::unordered_map<TermId, bool> cache_;
};

class ProjectIter : public Iter {
 public:
  ProjectIter(const PhysicalOp& op, const Dataset& d, const Deadline& dl)
      : Iter(dl), child_(make_iter(op.children[0], d, dl)), map_(positions(op.children[0].schema, op.schema)) {}
  void open() override { child_->open(); }
  bool next(Row& out) override {
    if (!child_->next(in_)) return false;
    out.assign(map_.size(), kUnbound);
    for (std::size_t k = 0; k < map_.size(); ++k)
      if (map_[k] >= 0) out[k] = in_[static_cast<std::size_t>(map_[k])];
    return true;
  }

 private:
  std::unique_ptr<Iter> child_;
  std::vector<int> map_;
  Row in_;
};

class DistinctIter : public Iter {
 public:
  DistinctIter(const PhysicalOp& op, const Dataset& d, const Deadline& dl)
      : Iter(dl), child_(make_iter(op.children[0], d, dl)) {}
  void open() override {
    child_->open();
    seen_.clear();
  }
  bool next(Row& out) override {
    while (child_->next(out)) {
      tick();
      if (seen_.insert(out).second) return true;
    }
    return false;
  }

 private:
  std::unique_ptr<Iter> child_;
  std::unordered_set<Row, RowHash> seen_;
};

class SortIter : public Iter {
 public:
  SortIter(const PhysicalOp& op, const Dataset& d, const Deadline& dl)
      : Iter(dl), child_(make_iter(op.children[0], d, dl)), dict_(d.dictionary()) {
    for (const auto& k : op.order) {
      auto it = std::find(op.schema.begin(), op.schema.end(), k.var);
      keys_.emplace_back(it == op.schema.end() ? -1 : static_cast<int>(it - op.schema.begin()), k.descending);
    }
  }
  void open() override {
    child_->open();
    rows_.clear();
    Row r;
    while (child_->next(r)) {
      tick();
      rows_.push_back(r);
    }
    auto term = [&](TermId t) -> std::optional<std::string_view> {
      if (t == kUnbound) return std::nullopt;
      return dict_.term(t);
    };
    std::stable_sort(rows_.begin(), rows_.end(), [&](const Row& a, const Row& b) {
      for (auto [col, desc] : keys_) {
        if (col < 0) continue;
        int c = compare_terms(term(a[static_cast<std::size_t>(col)]), term(b[static_cast<std::size_t>(col)]));
        if (c != 0) return desc ? c > 0 : c < 0;
      }
      return false;
    });
    pos_ = 0;
  }
  bool next(Row& out) override {
    if (pos_ >= rows_.size()) return false;
    out = rows_[pos_++];
    return true;
  }

 private:
  std::unique_ptr<Iter> child_;
  const TermDictionary& dict_;
  std::vector<std::pair<int, bool>> keys_;
  std::vector<Row> rows_;
  std::size_t pos_ = 0;
};

class SliceIter : public Iter {
 public:
  SliceIter(const PhysicalOp& op, const Dataset& d, const Deadline& dl)
      : Iter(dl), child_(make_iter(op.children[0], d, dl)), offset_(op.offset), limit_(op.limit) {}
  void open() override {
    child_->open();
    skipped_ = emitted_ = 0;
  }
  bool next(Row& out) override {
    if (limit_ && emitted_ >= *limit_) return false;
    while (skipped_ < offset_) {
      if (!child_->next(out)) return false;
      ++skipped_;
    }
    if (!child_->next(out)) return false;
    ++emitted_;
    return true;
  }

 private:
  std::unique_ptr<Iter> child_;
  std::uint64_t offset_;
  std::optional<std::uint64_t> limit_;
  std::uint64_t skipped_ = 0, emitted_ = 0;
};

std::unique_ptr<Iter> make_iter(const PhysicalOp& op, const Dataset& d, const Deadline& dl) {
  switch (op.kind) {
    case PK::Scan: return std::make_unique<ScanIter>(op, d, dl);
    case PK::Fetch: return std::make_unique<RelationIter>(d.intermediate(op.relation), dl);
    case PK::HashJoin: return std::make_unique<HashJoinIter>(op, d, dl);
    case PK::LeftOuterJoin: return std::make_unique<LeftOuterJoinIter>(op, d, dl);
    case PK::Union: return std::make_unique<UnionIter>(op, d, dl);
    case PK::Filter: return std::make_unique<FilterIter>(op, d, dl);
    case PK::Project: return std::make_unique<ProjectIter>(op, d, dl);
    case PK::Distinct: return std::make_unique<DistinctIter>(op, d, dl);
    case PK::Sort: return std::make_unique<SortIter>(op, d, dl);
    case PK::Slice: return std::make_unique<SliceIter>(op, d, dl);
  }
  throw Error("unknown physical operator");
}

std::optional<double> as_number(std::string_view term) {
  if (!is_literal(term)) return std::nullopt;
  std::string lex = lexical_form(term);
  std::string_view s = lex;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

PhysicalPlan compile(const CsNode& cs, const QueryState& s, const Dataset& d) { return lower(cs, s, d); }

PhysicalPlan with_modifiers(PhysicalPlan p, const Query& q) {
  auto wrap = [](PhysicalOp child, PK kind) {
    PhysicalOp op;
    op.kind = kind;
    op.schema = child.schema;
    op.certain = child.certain;
    op.estimate = child.estimate;
    op.children.push_back(std::move(child));
    return op;
  };
  // Order before projecting so sort keys outside the projection still work.
  if (!q.modifiers.order_by.empty()) {
    p = wrap(std::move(p), PK::Sort);
    p.order = q.modifiers.order_by;
  }
  p = wrap(std::move(p), PK::Project);
  p.schema = q.projection;
  p.certain = sorted_intersection(p.certain, q.projection);
  if (q.modifiers.distinct) p = wrap(std::move(p), PK::Distinct);
  if (q.modifiers.limit || q.modifiers.offset) {
    p = wrap(std::move(p), PK::Slice);
    p.offset = q.modifiers.offset.value_or(0);
    p.limit = q.modifiers.limit;
  }
  return p;
}

Relation execute(const PhysicalPlan& p, const Dataset& d, const Deadline& deadline) {
  auto it = make_iter(p, d, deadline);
  it->open();
  Relation out(p.schema);
  Row r;
  while (it->next(r)) out.add_row(r);
  deadline.check();
  return out;
}

int compare_terms(std::optional<std::string_view> a, std::optional<std::string_view> b) {
  if (!a || !b) return a ? 1 : b ? -1 : 0;
  auto na = as_number(*a), nb = as_number(*b);
  if (na && nb) return *na < *nb ? -1 : *na > *nb ? 1 : 0;
  std::string la = lexical_form(*a), lb = lexical_form(*b);
  int c = la.compare(lb);
  return c < 0 ? -1 : c > 0 ? 1 : 0;
}

bool eval_filter(const FilterExpr& f, std::optional<std::string_view> term) {
  if (!term) return false;
  if (f.op == CompareOp::Regex) {
    auto flags = std::regex::ECMAScript;
    if (f.flags.find('i') != std::string::npos) flags |= std::regex::icase;
    try {
      return std::regex_search(lexical_form(*term), std::regex(f.operand, flags));
    } catch (const std::regex_error&) {
      return false;
    }
  }
  int c = compare_terms(term, std::string_view(f.operand));
  switch (f.op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
    default: return false;
  }
}

void write_tsv(const Relation& r, const Dataset& d, std::ostream& out) {
  for (std::size_t i = 0; i < r.arity(); ++i) out << (i ? "\t?" : "?") << r.schema()[i];
  out << '\n';
  for (std::size_t k = 0; k < r.size(); ++k) {
    auto row = r.row(k);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << '\t';
      if (row[i] != kUnbound) out << d.dictionary().term(row[i]);
    }
    out << '\n';
  }
}

}  // namespace rosie
