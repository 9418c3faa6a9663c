#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adcminer/bitset.hpp"
#include "adcminer/dataset.hpp"
#include "adcminer/error.hpp"
#include "adcminer/predicate_space.hpp"

namespace adcminer {

using TupleId = std::uint32_t;

/// Evaluates one predicate on the ordered pair <t, t2>. SameTuple predicates
/// look only at t. Any null operand makes the predicate unsatisfied.
inline bool evaluate(const Dataset& d, const Predicate& p, std::size_t t, std::size_t t2) {
  const std::size_t rrow = p.pattern == Pattern::SameTuple ? t : t2;
  if (d.is_null(t, p.left_column) || d.is_null(rrow, p.right_column)) return false;
  if (d.column(p.left_column).type == ColumnType::Numeric)
    return holds(p.op, d.number(t, p.left_column), d.number(rrow, p.right_column));
  const bool eq = d.string_code(t, p.left_column) == d.string_code(rrow, p.right_column);
  return p.op == Operator::Eq ? eq : !eq;
}

/// Sat(t, t2): the set of predicates satisfied by the ordered pair.
inline PredicateBitset sat(const Dataset& d, const PredicateSpace& ps, std::size_t t, std::size_t t2) {
  PredicateBitset out(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (evaluate(d, ps.predicate(static_cast<PredicateId>(i)), t, t2)) out.set(i);
  return out;
}

/// Evi(D) as a bag: distinct satisfied-predicate sets, sorted, with counts.
class EvidenceSet {
 public:
  EvidenceSet() = default;
  EvidenceSet(std::size_t predicate_count, std::size_t tuple_count, std::vector<PredicateBitset> sets,
              std::vector<std::uint64_t> multiplicities)
      : predicate_count_(predicate_count),
        tuple_count_(tuple_count),
        sets_(std::move(sets)),
        multiplicities_(std::move(multiplicities)) {
    for (auto m : multiplicities_) total_pairs_ += m;
  }

  std::size_t predicate_count() const { return predicate_count_; }
  std::size_t tuple_count() const { return tuple_count_; }
  std::size_t distinct_count() const { return sets_.size(); }
  const PredicateBitset& set(std::size_t i) const { return sets_[i]; }
  const std::vector<PredicateBitset>& sets() const { return sets_; }
  std::uint64_t multiplicity(std::size_t i) const { return multiplicities_[i]; }
  const std::vector<std::uint64_t>& multiplicities() const { return multiplicities_; }
  std::uint64_t total_pairs() const { return total_pairs_; }
  /// |D|·(|D|−1): ordered pairs of distinct tuples.
  std::uint64_t pair_universe() const {
    const auto n = static_cast<std::uint64_t>(tuple_count_);
    return n < 2 ? 0 : n * (n - 1);
  }

  friend bool operator==(const EvidenceSet&, const EvidenceSet&) = default;

 private:
  std::size_t predicate_count_ = 0;
  std::size_t tuple_count_ = 0;
  std::vector<PredicateBitset> sets_;
  std::vector<std::uint64_t> multiplicities_;
  std::uint64_t total_pairs_ = 0;
};

struct TupleIncidence {
  TupleId tuple = 0;
  std::uint32_t count = 0;

  friend bool operator==(const TupleIncidence&, const TupleIncidence&) = default;
};

/// vios: for every distinct evidence set, the tuples involved in pairs with
/// that Sat and how many such pairs each is in (either position). Lists are
/// sorted by tuple id.
class Vios {
 public:
  Vios() = default;
  explicit Vios(std::vector<std::vector<TupleIncidence>> per_set) : per_set_(std::move(per_set)) {}

  bool empty() const { return per_set_.empty(); }
  std::size_t set_count() const { return per_set_.size(); }
  const std::vector<TupleIncidence>& incidences(std::size_t set_index) const { return per_set_[set_index]; }
  const std::vector<std::vector<TupleIncidence>>& all() const { return per_set_; }

  friend bool operator==(const Vios&, const Vios&) = default;

 private:
  std::vector<std::vector<TupleIncidence>> per_set_;
};

struct Evidence {
  EvidenceSet set;
  Vios vios;
};

struct EvidenceOptions {
  unsigned threads = 1;
  bool with_vios = true;
};

/// Pair-weight of the evidence sets not hit by h.
inline std::uint64_t uncovered_weight(const EvidenceSet& e, const PredicateBitset& h) {
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < e.distinct_count(); ++i)
    if (!e.set(i).intersects(h)) w += e.multiplicity(i);
  return w;
}

namespace detail {

// Precompiled per-group comparison plan for the pairwise scan.
class SatScanner {
 public:
  SatScanner(const Dataset& d, const PredicateSpace& ps) : d_(d), ps_(ps) {
    for (const auto& g : ps.groups()) {
      if (g.pattern == Pattern::CrossTuple) cross_.push_back(g);
    }
    same_bits_.reserve(d.row_count());
    for (std::size_t r = 0; r < d.row_count(); ++r) {
      PredicateBitset b(ps.size());
      for (const auto& g : ps.groups())
        if (g.pattern == Pattern::SameTuple) apply(g, r, r, b);
      same_bits_.push_back(std::move(b));
    }
  }

  // out = Sat(t, t2); out must have width |P|.
  void scan(std::size_t t, std::size_t t2, PredicateBitset& out) const {
    out.words() = same_bits_[t].words();
    for (const auto& g : cross_) apply(g, t, t2, out);
  }

 private:
  // Bit offsets within a numeric group follow kNumericOperators.
  static constexpr unsigned kLess = 0b101010;     // Neq, Lt, Leq
  static constexpr unsigned kEqual = 0b110001;    // Eq, Geq, Leq
  static constexpr unsigned kGreater = 0b010110;  // Neq, Gt, Geq

  void apply(const RedundancyGroup& g, std::size_t lrow, std::size_t rrow, PredicateBitset& out) const {
    unsigned mask = 0;
    if (g.type == ColumnType::Numeric) {
      const auto& nl = d_.null_mask(g.left_column);
      const auto& nr = d_.null_mask(g.right_column);
      if (nl[lrow] || nr[rrow]) return;
      const double a = d_.numeric_column(g.left_column)[lrow];
      const double b = d_.numeric_column(g.right_column)[rrow];
      mask = a < b ? kLess : (a == b ? kEqual : kGreater);
    } else {
      const auto a = d_.code_column(g.left_column)[lrow];
      const auto b = d_.code_column(g.right_column)[rrow];
      if (a == Dataset::kNullCode || b == Dataset::kNullCode) return;
      mask = a == b ? 0b01 : 0b10;
    }
    while (mask) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(mask));
      out.set(g.first + bit);
      mask &= mask - 1;
    }
  }

  const Dataset& d_;
  const PredicateSpace& ps_;
  std::vector<RedundancyGroup> cross_;
  std::vector<PredicateBitset> same_bits_;
};

struct IncidenceRecord {
  PredicateBitset set;
  TupleId tuple;
  std::uint32_t count;
};

struct BlockResult {
  std::unordered_map<PredicateBitset, std::uint64_t, PredicateBitsetHash> bag;
  std::vector<IncidenceRecord> incidences;
};

inline void scan_block(const SatScanner& scanner, std::size_t n, std::size_t width, std::size_t begin,
                       std::size_t end, bool with_vios, BlockResult& out) {
  PredicateBitset cur(width);
  std::unordered_map<PredicateBitset, std::uint32_t, PredicateBitsetHash> per_tuple;
  for (std::size_t t = begin; t < end; ++t) {
    per_tuple.clear();
    for (std::size_t t2 = 0; t2 < n; ++t2) {
      if (t2 == t) continue;
      scanner.scan(t, t2, cur);
      auto it = out.bag.find(cur);
      if (it == out.bag.end()) {
        out.bag.emplace(cur, 1);
      } else {
        ++it->second;
      }
      if (with_vios) {
        auto pt = per_tuple.find(cur);
        if (pt == per_tuple.end()) {
          per_tuple.emplace(cur, 1);
        } else {
          ++pt->second;
        }
        // t as the second element of <t2, t>
        scanner.scan(t2, t, cur);
        pt = per_tuple.find(cur);
        if (pt == per_tuple.end()) {
          per_tuple.emplace(cur, 1);
        } else {
          ++pt->second;
        }
      }
    }
    if (with_vios) {
      for (auto& [set, count] : per_tuple)
        out.incidences.push_back(IncidenceRecord{set, static_cast<TupleId>(t), count});
    }
  }
}

}  // namespace detail

/// Builds Evi(D) over all ordered pairs of distinct tuples, plus vios when
/// requested. Rows are split into contiguous blocks, one per thread; the
/// result does not depend on the thread count.
inline Evidence build_evidence(const Dataset& d, const PredicateSpace& ps, const EvidenceOptions& opts = {}) {
  const std::size_t n = d.row_count();
  if (n < 2) throw DataError("insufficient tuples: evidence needs at least 2 rows, got " + std::to_string(n));
  const std::size_t width = ps.size();
  const detail::SatScanner scanner(d, ps);

  const std::size_t threads = std::clamp<std::size_t>(opts.threads, 1, n);
  std::vector<detail::BlockResult> blocks(threads);
  {
    std::vector<std::thread> pool;
    for (std::size_t b = 0; b < threads; ++b) {
      const std::size_t begin = n * b / threads;
      const std::size_t end = n * (b + 1) / threads;
      if (threads == 1) {
        detail::scan_block(scanner, n, width, begin, end, opts.with_vios, blocks[b]);
      } else {
        pool.emplace_back([&, b, begin, end] {
          detail::scan_block(scanner, n, width, begin, end, opts.with_vios, blocks[b]);
        });
      }
    }
    for (auto& th : pool) th.join();
  }

  std::unordered_map<PredicateBitset, std::uint64_t, PredicateBitsetHash> merged;
  for (auto& blk : blocks)
    for (auto& [set, count] : blk.bag) merged[set] += count;

  std::vector<std::pair<PredicateBitset, std::uint64_t>> entries(merged.begin(), merged.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<PredicateBitset> sets;
  std::vector<std::uint64_t> mults;
  sets.reserve(entries.size());
  mults.reserve(entries.size());
  std::unordered_map<PredicateBitset, std::size_t, PredicateBitsetHash> index;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    index.emplace(entries[i].first, i);
    sets.push_back(std::move(entries[i].first));
    mults.push_back(entries[i].second);
  }

  Evidence out;
  if (opts.with_vios) {
    std::vector<std::vector<TupleIncidence>> per_set(sets.size());
    // Blocks cover ascending tuple ranges, so per-set lists come out sorted.
    for (auto& blk : blocks) {
      std::vector<detail::IncidenceRecord> recs = std::move(blk.incidences);
      std::stable_sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.tuple < b.tuple; });
      for (auto& rec : recs) per_set[index.at(rec.set)].push_back(TupleIncidence{rec.tuple, rec.count});
    }
    out.vios = Vios(std::move(per_set));
  }
  out.set = EvidenceSet(width, n, std::move(sets), std::move(mults));
  return out;
}

}  // namespace adcminer
