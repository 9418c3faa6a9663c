#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adcminer/bitset.hpp"
#include "adcminer/dataset.hpp"

namespace adcminer {

using PredicateId = std::uint32_t;

/// Comparison operators in enum order. The numeric redundancy group lays out
/// its six predicates in exactly this order.
enum class Operator : std::uint8_t { Eq, Neq, Gt, Lt, Geq, Leq };

inline constexpr std::array<Operator, 6> kNumericOperators = {Operator::Eq,  Operator::Neq, Operator::Gt,
                                                              Operator::Lt,  Operator::Geq, Operator::Leq};
inline constexpr std::array<Operator, 2> kStringOperators = {Operator::Eq, Operator::Neq};

constexpr Operator complement(Operator op) {
  switch (op) {
    case Operator::Eq: return Operator::Neq;
    case Operator::Neq: return Operator::Eq;
    case Operator::Gt: return Operator::Leq;
    case Operator::Leq: return Operator::Gt;
    case Operator::Lt: return Operator::Geq;
    case Operator::Geq: return Operator::Lt;
  }
  return op;
}

constexpr std::string_view symbol(Operator op) {
  switch (op) {
    case Operator::Eq: return "=";
    case Operator::Neq: return "!=";
    case Operator::Gt: return ">";
    case Operator::Lt: return "<";
    case Operator::Geq: return ">=";
    case Operator::Leq: return "<=";
  }
  return "?";
}

/// Evaluates `a op b` on numbers.
constexpr bool holds(Operator op, double a, double b) {
  switch (op) {
    case Operator::Eq: return a == b;
    case Operator::Neq: return a != b;
    case Operator::Gt: return a > b;
    case Operator::Lt: return a < b;
    case Operator::Geq: return a >= b;
    case Operator::Leq: return a <= b;
  }
  return false;
}

/// CrossTuple compares t[A] with t'[B]; SameTuple compares t[A] with t[B].
enum class Pattern : std::uint8_t { CrossTuple, SameTuple };

struct Predicate {
  std::size_t left_column = 0;
  std::size_t right_column = 0;
  Operator op = Operator::Eq;
  Pattern pattern = Pattern::CrossTuple;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Predicates sharing (pattern, left, right); ids are contiguous.
struct RedundancyGroup {
  Pattern pattern = Pattern::CrossTuple;
  std::size_t left_column = 0;
  std::size_t right_column = 0;
  ColumnType type = ColumnType::String;
  PredicateId first = 0;
  std::uint32_t size = 0;
};

class PredicateSpace;
inline PredicateSpace generate_predicate_space(const Dataset& d, double common_value_threshold);

class PredicateSpace {
 public:
  PredicateSpace() = default;

  std::size_t size() const { return predicates_.size(); }
  const std::vector<Predicate>& predicates() const { return predicates_; }
  const Predicate& predicate(PredicateId id) const { return predicates_[id]; }
  const std::vector<RedundancyGroup>& groups() const { return groups_; }
  std::uint32_t group_of(PredicateId id) const { return group_of_[id]; }
  const RedundancyGroup& group(PredicateId id) const { return groups_[group_of_[id]]; }
  const std::vector<std::string>& column_names() const { return column_names_; }

  PredicateId complement(PredicateId id) const { return complement_of_[id]; }

  PredicateBitset complement_set(const PredicateBitset& s) const {
    PredicateBitset out(size());
    s.for_each([&](std::size_t id) { out.set(complement_of_[id]); });
    return out;
  }
  std::vector<PredicateId> complement_set(const std::vector<PredicateId>& s) const {
    std::vector<PredicateId> out;
    out.reserve(s.size());
    for (PredicateId id : s) out.push_back(complement_of_[id]);
    return out;
  }

  /// Bitset of all predicates in the same redundancy group as id.
  PredicateBitset group_members(PredicateId id) const {
    PredicateBitset out(size());
    const auto& g = group(id);
    for (std::uint32_t i = 0; i < g.size; ++i) out.set(g.first + i);
    return out;
  }

  std::optional<PredicateId> find(Pattern pattern, std::size_t left, std::size_t right, Operator op) const {
    for (const auto& g : groups_) {
      if (g.pattern != pattern || g.left_column != left || g.right_column != right) continue;
      for (std::uint32_t i = 0; i < g.size; ++i)
        if (predicates_[g.first + i].op == op) return g.first + i;
      return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<PredicateId> find(Pattern pattern, std::string_view left, std::string_view right, Operator op) const {
    auto l = column_index(left);
    auto r = column_index(right);
    if (!l || !r) return std::nullopt;
    return find(pattern, *l, *r, op);
  }

  /// Renders as `t.<col> <op> t'.<col>` (both sides `t.` for SameTuple).
  std::string render(PredicateId id) const {
    const auto& p = predicates_[id];
    std::string out = "t." + column_names_[p.left_column] + " ";
    out += symbol(p.op);
    out += p.pattern == Pattern::CrossTuple ? " t'." : " t.";
    out += column_names_[p.right_column];
    return out;
  }

 private:
  friend PredicateSpace generate_predicate_space(const Dataset& d, double common_value_threshold);

  std::optional<std::size_t> column_index(std::string_view name) const {
    for (std::size_t c = 0; c < column_names_.size(); ++c)
      if (column_names_[c] == name) return c;
    return std::nullopt;
  }

  void add_group(Pattern pattern, std::size_t left, std::size_t right, ColumnType type) {
    RedundancyGroup g;
    g.pattern = pattern;
    g.left_column = left;
    g.right_column = right;
    g.type = type;
    g.first = static_cast<PredicateId>(predicates_.size());
    const auto gid = static_cast<std::uint32_t>(groups_.size());
    auto emit = [&](auto ops) {
      for (Operator op : ops) {
        predicates_.push_back(Predicate{left, right, op, pattern});
        group_of_.push_back(gid);
      }
      g.size = static_cast<std::uint32_t>(ops.size());
    };
    if (type == ColumnType::Numeric) {
      emit(kNumericOperators);
    } else {
      emit(kStringOperators);
    }
    for (std::uint32_t i = 0; i < g.size; ++i) {
      const Operator want = adcminer::complement(predicates_[g.first + i].op);
      for (std::uint32_t j = 0; j < g.size; ++j)
        if (predicates_[g.first + j].op == want) complement_of_.push_back(g.first + j);
    }
    groups_.push_back(g);
  }

  std::vector<Predicate> predicates_;
  std::vector<PredicateId> complement_of_;
  std::vector<std::uint32_t> group_of_;
  std::vector<RedundancyGroup> groups_;
  std::vector<std::string> column_names_;
};

/// Shared-value ratio |values(A) ∩ values(B)| / min(|values(A)|, |values(B)|)
/// over distinct non-null values. Zero when either column is all null.
inline double common_value_ratio(const Dataset& d, std::size_t a, std::size_t b) {
  if (d.column(a).type != d.column(b).type) return 0.0;
  auto distinct = [&](std::size_t c) {
    std::vector<double> vals;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
      if (d.is_null(r, c)) continue;
      vals.push_back(d.column(c).type == ColumnType::Numeric ? d.number(r, c)
                                                             : static_cast<double>(d.string_code(r, c)));
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
  };
  const auto va = distinct(a);
  const auto vb = distinct(b);
  const std::size_t denom = std::min(va.size(), vb.size());
  if (denom == 0) return 0.0;
  std::vector<double> common;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(denom);
}

/// Builds the predicate space. Same-column CrossTuple groups are always
/// present; cross-column groups (both patterns) need matching types and a
/// common-value ratio of at least `common_value_threshold`. Ids are ordered
/// by (pattern, left, right, operator).
inline PredicateSpace generate_predicate_space(const Dataset& d, double common_value_threshold) {
  PredicateSpace ps;
  const std::size_t k = d.column_count();
  for (std::size_t c = 0; c < k; ++c) ps.column_names_.push_back(d.column(c).name);

  std::vector<std::vector<char>> comparable(k, std::vector<char>(k, 0));
  for (std::size_t a = 0; a < k; ++a) {
    comparable[a][a] = 1;
    for (std::size_t b = a + 1; b < k; ++b) {
      if (d.column(a).type != d.column(b).type) continue;
      const bool ok = common_value_ratio(d, a, b) >= common_value_threshold;
      comparable[a][b] = comparable[b][a] = ok ? 1 : 0;
    }
  }
  for (Pattern pattern : {Pattern::CrossTuple, Pattern::SameTuple}) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (!comparable[a][b]) continue;
        if (pattern == Pattern::SameTuple && a == b) continue;
        ps.add_group(pattern, a, b, d.column(a).type);
      }
    }
  }
  return ps;
}

}  // namespace adcminer
