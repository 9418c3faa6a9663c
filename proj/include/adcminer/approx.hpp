#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adcminer/bitset.hpp"
#include "adcminer/dataset.hpp"
#include "adcminer/error.hpp"
#include "adcminer/evidence.hpp"
#include "adcminer/predicate_space.hpp"

// All functions here take h, the complement of the DC's predicate set. An
// evidence set S is violating iff S ∩ h = ∅.

namespace adcminer {

enum class ApproxKind { F1, F2, F3Greedy };

inline std::string_view to_string(ApproxKind k) {
  switch (k) {
    case ApproxKind::F1: return "f1";
    case ApproxKind::F2: return "f2";
    case ApproxKind::F3Greedy: return "f3";
  }
  return "?";
}

inline std::optional<ApproxKind> parse_approx_kind(std::string_view token) {
  if (token == "f1") return ApproxKind::F1;
  if (token == "f2") return ApproxKind::F2;
  if (token == "f3") return ApproxKind::F3Greedy;
  return std::nullopt;
}

/// 1 − f1: uncovered pair-weight over the pair universe.
inline double violation_rate(const EvidenceSet& e, const PredicateBitset& h) {
  const auto universe = e.pair_universe();
  if (universe == 0) throw DataError("f1 undefined: empty pair universe");
  return static_cast<double>(uncovered_weight(e, h)) / static_cast<double>(universe);
}

/// Fraction of ordered pairs satisfying the DC: 1 − uncovered / |D|(|D|−1).
inline double f1_score(const EvidenceSet& e, const PredicateBitset& h) {
  const auto universe = e.pair_universe();
  if (universe == 0) throw DataError("f1 undefined: empty pair universe");
  return 1.0 - static_cast<double>(uncovered_weight(e, h)) / static_cast<double>(universe);
}

/// Tuples that take part in at least one violating pair.
inline std::vector<char> problematic_tuples(const EvidenceSet& e, const Vios& v, std::size_t n_tuples,
                                            const PredicateBitset& h) {
  std::vector<char> bad(n_tuples, 0);
  for (std::size_t i = 0; i < e.distinct_count(); ++i) {
    if (e.set(i).intersects(h)) continue;
    for (const auto& inc : v.incidences(i))
      if (inc.count > 0) bad[inc.tuple] = 1;
  }
  return bad;
}

/// Fraction of tuples not involved in any violation.
inline double f2_score(const EvidenceSet& e, const Vios& v, std::size_t n_tuples, const PredicateBitset& h) {
  if (n_tuples == 0) throw DataError("f2 undefined: no tuples");
  const auto bad = problematic_tuples(e, v, n_tuples, h);
  const auto count = static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
  return 1.0 - static_cast<double>(count) / static_cast<double>(n_tuples);
}

struct GreedyF3Result {
  bool accept = true;
  /// R, in selection order.
  std::vector<TupleId> removed;
  /// u: uncovered pair-weight.
  std::uint64_t uncovered = 0;
};

/// Greedy stand-in for f3: sort tuples by violation incidence v(t) (ties by
/// lower id) and take them until the covered count reaches u. Accepts iff
/// |R| / d_size ≤ ε.
inline GreedyF3Result greedy_f3(std::size_t d_size, const EvidenceSet& e, const Vios& v, const PredicateBitset& h,
                                double epsilon) {
  GreedyF3Result res;
  std::vector<std::uint64_t> incidence(d_size, 0);
  for (std::size_t i = 0; i < e.distinct_count(); ++i) {
    if (e.set(i).intersects(h)) continue;
    res.uncovered += e.multiplicity(i);
    for (const auto& inc : v.incidences(i)) incidence[inc.tuple] += inc.count;
  }
  if (res.uncovered > 0) {
    std::vector<TupleId> order(d_size);
    std::iota(order.begin(), order.end(), TupleId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](TupleId a, TupleId b) { return incidence[a] > incidence[b]; });
    std::uint64_t covered = 0;
    for (TupleId t : order) {
      if (covered >= res.uncovered) break;
      covered += incidence[t];
      res.removed.push_back(t);
    }
  }
  res.accept = d_size == 0 || static_cast<double>(res.removed.size()) / static_cast<double>(d_size) <= epsilon;
  return res;
}

inline bool greedy_f3_accept(std::size_t d_size, const EvidenceSet& e, const Vios& v, const PredicateBitset& h,
                             double epsilon) {
  return greedy_f3(d_size, e, v, h, epsilon).accept;
}

/// 1 − f1 ≤ 2ε. False proves that neither f2 nor the exact f3 can accept at ε.
inline bool prefilter_2eps(const EvidenceSet& e, const PredicateBitset& h, double epsilon) {
  return violation_rate(e, h) <= 2.0 * epsilon;
}

/// Ordered pairs <t, t2> (t ≠ t2) that violate the DC whose complement set
/// is h, found by evaluating predicates directly on the rows.
inline std::vector<std::pair<std::size_t, std::size_t>> violating_pairs(const Dataset& d, const PredicateSpace& ps,
                                                                        const PredicateBitset& h) {
  const auto ids = h.to_indices();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t t = 0; t < d.row_count(); ++t) {
    for (std::size_t t2 = 0; t2 < d.row_count(); ++t2) {
      if (t == t2) continue;
      bool hit = false;
      for (auto id : ids) {
        if (evaluate(d, ps.predicate(static_cast<PredicateId>(id)), t, t2)) {
          hit = true;
          break;
        }
      }
      if (!hit) out.emplace_back(t, t2);
    }
  }
  return out;
}

inline constexpr std::size_t kExactF3RowLimit = 20;

/// Minimum number of tuples whose removal leaves no violating pair. Exhaustive
/// over tuple subsets; only for |D| ≤ row_limit.
inline std::size_t exact_min_removals(const Dataset& d, const PredicateSpace& ps, const PredicateBitset& h,
                                      std::size_t row_limit = kExactF3RowLimit) {
  const std::size_t n = d.row_count();
  if (n > row_limit || n >= 63)
    throw DataError("exact f3 oracle limited to " + std::to_string(row_limit) + " rows, got " + std::to_string(n));
  const auto pairs = violating_pairs(d, ps, h);
  if (pairs.empty()) return 0;
  std::size_t best = n;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t removed = 0; removed < limit; ++removed) {
    const auto size = static_cast<std::size_t>(std::popcount(removed));
    if (size >= best) continue;
    bool ok = true;
    for (const auto& [a, b] : pairs) {
      if (!((removed >> a) & 1U) && !((removed >> b) & 1U)) {
        ok = false;
        break;
      }
    }
    if (ok) best = size;
  }
  return best;
}

/// Exact f3: size of a cardinality repair over |D|.
inline double exact_f3_bruteforce(const Dataset& d, const PredicateSpace& ps, const PredicateBitset& h,
                                  std::size_t row_limit = kExactF3RowLimit) {
  const std::size_t n = d.row_count();
  if (n == 0) return 1.0;
  return static_cast<double>(n - exact_min_removals(d, ps, h, row_limit)) / static_cast<double>(n);
}

/// A pluggable approximation function for the enumerator.
class ApproxFunction {
 public:
  virtual ~ApproxFunction() = default;
  virtual ApproxKind kind() const = 0;
  /// Whether 1 − f(h) ≤ ε.
  virtual bool accepts(const PredicateBitset& h, double epsilon) const = 0;
  /// f(h) in [0,1]. For F3Greedy this is 1 − |R|/|D|, not a certified f3.
  virtual double score(const PredicateBitset& h) const = 0;
  /// Monotone acceptance test used to prune whole branches. Must accept
  /// whenever accepts() does.
  virtual bool prune_accepts(const PredicateBitset& h, double epsilon) const { return accepts(h, epsilon); }
};

class F1Function final : public ApproxFunction {
 public:
  explicit F1Function(const EvidenceSet& e) : e_(e) {}
  ApproxKind kind() const override { return ApproxKind::F1; }
  bool accepts(const PredicateBitset& h, double epsilon) const override {
    return violation_rate(e_, h) <= epsilon;
  }
  double score(const PredicateBitset& h) const override { return f1_score(e_, h); }

 private:
  const EvidenceSet& e_;
};

class F2Function final : public ApproxFunction {
 public:
  F2Function(const EvidenceSet& e, const Vios& v) : e_(e), v_(v) {
    if (v.set_count() != e.distinct_count()) throw DataError("f2 requires vios for every evidence set");
  }
  ApproxKind kind() const override { return ApproxKind::F2; }
  bool accepts(const PredicateBitset& h, double epsilon) const override {
    if (!prefilter_2eps(e_, h, epsilon)) return false;
    const auto bad = problematic_tuples(e_, v_, e_.tuple_count(), h);
    const auto count = static_cast<double>(std::count(bad.begin(), bad.end(), 1));
    return count / static_cast<double>(e_.tuple_count()) <= epsilon;
  }
  double score(const PredicateBitset& h) const override { return f2_score(e_, v_, e_.tuple_count(), h); }

 private:
  const EvidenceSet& e_;
  const Vios& v_;
};

/// GreedyF3 with an optional 2ε pre-filter. The pre-filter is exact only for
/// the true f3; for the greedy surrogate it is a heuristic skip, counted in
/// prefilter_rejections().
class F3GreedyFunction final : public ApproxFunction {
 public:
  F3GreedyFunction(const EvidenceSet& e, const Vios& v, bool use_prefilter = true)
      : e_(e), v_(v), use_prefilter_(use_prefilter) {
    if (v.set_count() != e.distinct_count()) throw DataError("f3 requires vios for every evidence set");
  }
  ApproxKind kind() const override { return ApproxKind::F3Greedy; }
  bool accepts(const PredicateBitset& h, double epsilon) const override {
    const bool greedy = greedy_f3_accept(e_.tuple_count(), e_, v_, h, epsilon);
    if (use_prefilter_ && greedy && !prefilter_2eps(e_, h, epsilon)) {
      ++prefilter_rejections_;
      return false;
    }
    return greedy;
  }
  double score(const PredicateBitset& h) const override {
    const auto r = greedy_f3(e_.tuple_count(), e_, v_, h, 0.0);
    return 1.0 - static_cast<double>(r.removed.size()) / static_cast<double>(e_.tuple_count());
  }
  std::size_t prefilter_rejections() const { return prefilter_rejections_; }

 private:
  const EvidenceSet& e_;
  const Vios& v_;
  bool use_prefilter_;
  mutable std::size_t prefilter_rejections_ = 0;
};

inline std::unique_ptr<ApproxFunction> make_approx(ApproxKind kind, const Evidence& ev) {
  switch (kind) {
    case ApproxKind::F1: return std::make_unique<F1Function>(ev.set);
    case ApproxKind::F2: return std::make_unique<F2Function>(ev.set, ev.vios);
    case ApproxKind::F3Greedy: return std::make_unique<F3GreedyFunction>(ev.set, ev.vios);
  }
  return nullptr;
}

}  // namespace adcminer
