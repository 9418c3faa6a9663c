#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "adcminer/approx.hpp"
#include "adcminer/bitset.hpp"
#include "adcminer/evidence.hpp"
#include "adcminer/predicate_space.hpp"

namespace adcminer {

/// Bitset over family (evidence-set) indices.
using IndexBitset = PredicateBitset;
using Family = std::vector<PredicateBitset>;

/// Mutable state shared by MMCS and ADCEnum. Family members are indexed
/// 0..|M|−1; elements (predicates) 0..|K|−1.
struct SearchState {
  SearchState(const Family& family, std::size_t universe)
      : family(&family),
        in_s(universe),
        crit(universe),
        uncov(IndexBitset::full(family.size())),
        cand(PredicateBitset::full(universe)),
        can_hit(family.size(), 1) {}

  const Family* family;
  std::vector<std::uint32_t> s;
  PredicateBitset in_s;
  /// crit[e]: family members for which e ∈ S is the only element of S they contain.
  std::vector<std::vector<std::uint32_t>> crit;
  IndexBitset uncov;
  PredicateBitset cand;
  std::vector<char> can_hit;

  bool all_critical() const {
    for (auto u : s)
      if (crit[u].empty()) return false;
    return true;
  }
};

struct CritUncovLog {
  std::uint32_t element = 0;
  std::vector<std::uint32_t> moved;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stripped;
};

/// Records the effect of adding e to S: uncovered members containing e move
/// to crit[e], and members containing e are stripped from crit[u], u ∈ S.
/// Call before pushing e onto S.
inline CritUncovLog update_crit_uncov(SearchState& st, std::uint32_t e) {
  CritUncovLog log;
  log.element = e;
  const Family& fam = *st.family;
  st.uncov.for_each([&](std::size_t f) {
    if (fam[f].test(e)) log.moved.push_back(static_cast<std::uint32_t>(f));
  });
  for (auto f : log.moved) {
    st.crit[e].push_back(f);
    st.uncov.reset(f);
  }
  for (auto u : st.s) {
    auto& list = st.crit[u];
    auto keep = list.begin();
    for (auto it = list.begin(); it != list.end(); ++it) {
      if (fam[*it].test(e)) {
        log.stripped.emplace_back(u, *it);
      } else {
        *keep++ = *it;
      }
    }
    list.erase(keep, list.end());
  }
  return log;
}

inline void undo(SearchState& st, const CritUncovLog& log) {
  for (const auto& [u, f] : log.stripped) st.crit[u].push_back(f);
  for (auto f : log.moved) st.uncov.set(f);
  st.crit[log.element].clear();
}

/// Marks every uncovered member with no candidate element as un-hittable.
/// Returns the indices flipped.
inline std::vector<std::uint32_t> update_can_cover(SearchState& st) {
  std::vector<std::uint32_t> flipped;
  const Family& fam = *st.family;
  st.uncov.for_each([&](std::size_t f) {
    if (st.can_hit[f] && !fam[f].intersects(st.cand)) {
      st.can_hit[f] = 0;
      flipped.push_back(static_cast<std::uint32_t>(f));
    }
  });
  return flipped;
}

inline void undo_can_cover(SearchState& st, const std::vector<std::uint32_t>& flipped) {
  for (auto f : flipped) st.can_hit[f] = 1;
}

/// Removes from cand the other members of e's redundancy group. Returns the
/// removed predicates.
inline PredicateBitset remove_redundant_preds(SearchState& st, const PredicateSpace& ps, PredicateId e) {
  PredicateBitset removed = ps.group_members(e) & st.cand;
  removed.reset(e);
  st.cand -= removed;
  return removed;
}

/// Every minimal hitting set of `family` over elements 0..universe−1, each
/// exactly once (Murakami–Uno MMCS).
inline std::vector<std::vector<std::uint32_t>> mmcs(std::size_t universe, const Family& family) {
  std::vector<std::vector<std::uint32_t>> out;
  SearchState st(family, universe);

  std::function<void()> rec = [&] {
    if (st.uncov.none()) {
      auto hs = st.s;
      std::sort(hs.begin(), hs.end());
      out.push_back(std::move(hs));
      return;
    }
    // Member with the fewest candidates.
    std::size_t chosen = 0;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    st.uncov.for_each([&](std::size_t f) {
      const std::size_t c = family[f].intersection_count(st.cand);
      if (c < best) {
        best = c;
        chosen = f;
      }
    });
    const PredicateBitset c_set = st.cand & family[chosen];
    st.cand -= c_set;
    c_set.for_each([&](std::size_t e_sz) {
      const auto e = static_cast<std::uint32_t>(e_sz);
      const auto log = update_crit_uncov(st, e);
      if (st.all_critical()) {
        st.s.push_back(e);
        st.in_s.set(e);
        rec();
        st.in_s.reset(e);
        st.s.pop_back();
        st.cand.set(e);
      }
      undo(st, log);
    });
    st.cand |= c_set;
  };
  rec();
  return out;
}

/// One emitted constraint. `hitting_set` is h = Ŝ_φ; the DC is its
/// complement.
struct Discovery {
  std::vector<PredicateId> hitting_set;
  double score = 0.0;
  std::uint64_t violating_pairs = 0;
  std::uint64_t pair_universe = 0;
};

struct EnumStats {
  std::uint64_t iterations = 0;
  std::uint64_t emitted = 0;
  std::uint64_t skip_branches = 0;
  std::uint64_t will_cover_prunes = 0;
  /// The empty DC was accepted: ε is at least the total violation rate.
  bool empty_accepted = false;
  bool cancelled = false;
};

/// Return false to stop the enumeration.
using DiscoverySink = std::function<bool(const Discovery&)>;

/// Enumerates minimal approximate hitting sets of the evidence set (minimal
/// ADCs) for a valid approximation function. Single-threaded; the evidence
/// set and the function may be shared with other enumerators.
class AdcEnumerator {
 public:
  AdcEnumerator(const EvidenceSet& evidence, const PredicateSpace& ps, const ApproxFunction& f, double epsilon)
      : evidence_(evidence), ps_(ps), f_(f), epsilon_(epsilon), state_(evidence.sets(), ps.size()) {}

  const SearchState& state() const { return state_; }
  SearchState& state() { return state_; }
  const EnumStats& stats() const { return stats_; }

  bool is_minimal(const PredicateBitset& s) const {
    bool minimal = true;
    s.for_each([&](std::size_t e) {
      if (!minimal) return;
      PredicateBitset sub = s;
      sub.reset(e);
      if (f_.accepts(sub, epsilon_)) minimal = false;
    });
    return minimal;
  }

  bool will_cover() const { return f_.prune_accepts(state_.in_s | state_.cand, epsilon_); }

  /// Runs the enumeration from the empty set.
  EnumStats run(const DiscoverySink& sink) {
    sink_ = &sink;
    iterate();
    sink_ = nullptr;
    return stats_;
  }

  /// One recursive step from the current state. Exposed for state tests.
  void iterate() {
    if (stats_.cancelled) return;
    ++stats_.iterations;
    auto& st = state_;
    if (f_.accepts(st.in_s, epsilon_)) {
      // Any superset of an accepted non-minimal S is non-minimal too.
      if (is_minimal(st.in_s)) emit();
      return;
    }

    const auto chosen = choose_member();
    if (!chosen) return;
    const PredicateBitset& member = evidence_.set(*chosen);

    // Branch 1: leave the member unhit.
    {
      const PredicateBitset dropped = st.cand & member;
      st.cand -= dropped;
      const auto flipped = update_can_cover(st);
      ++stats_.skip_branches;
      if (will_cover()) {
        iterate();
      } else {
        ++stats_.will_cover_prunes;
      }
      undo_can_cover(st, flipped);
      st.cand |= dropped;
    }

    // Branch 2: hit it with each candidate in turn.
    const PredicateBitset c_set = st.cand & member;
    st.cand -= c_set;
    c_set.for_each([&](std::size_t e_sz) {
      const auto e = static_cast<std::uint32_t>(e_sz);
      const auto log = update_crit_uncov(st, e);
      if (st.all_critical()) {
        const PredicateBitset redundant = remove_redundant_preds(st, ps_, e);
        st.s.push_back(e);
        st.in_s.set(e);
        iterate();
        st.in_s.reset(e);
        st.s.pop_back();
        st.cand |= redundant;
        st.cand.set(e);
      }
      undo(st, log);
    });
    st.cand |= c_set;
  }

 private:
  // Uncovered, hittable member maximizing |F ∩ cand|; lowest index on ties.
  std::optional<std::size_t> choose_member() const {
    std::optional<std::size_t> chosen;
    std::size_t best = 0;
    state_.uncov.for_each([&](std::size_t f) {
      if (!state_.can_hit[f]) return;
      const std::size_t c = evidence_.set(f).intersection_count(state_.cand);
      if (!chosen || c > best) {
        chosen = f;
        best = c;
      }
    });
    return chosen;
  }

  void emit() {
    if (state_.s.empty()) {
      stats_.empty_accepted = true;
      return;
    }
    Discovery d;
    d.hitting_set.assign(state_.s.begin(), state_.s.end());
    std::sort(d.hitting_set.begin(), d.hitting_set.end());
    d.score = f_.score(state_.in_s);
    d.violating_pairs = uncovered_weight(evidence_, state_.in_s);
    d.pair_universe = evidence_.pair_universe();
    ++stats_.emitted;
    if (sink_ && !(*sink_)(d)) stats_.cancelled = true;
  }

  const EvidenceSet& evidence_;
  const PredicateSpace& ps_;
  const ApproxFunction& f_;
  double epsilon_;
  SearchState state_;
  EnumStats stats_;
  const DiscoverySink* sink_ = nullptr;
};

/// Collects all minimal ADCs into a vector (discovery order).
inline std::vector<Discovery> adc_enum(const EvidenceSet& e, const PredicateSpace& ps, const ApproxFunction& f,
                                       double epsilon, EnumStats* stats = nullptr) {
  std::vector<Discovery> out;
  AdcEnumerator en(e, ps, f, epsilon);
  const auto st = en.run([&](const Discovery& d) {
    out.push_back(d);
    return true;
  });
  if (stats) *stats = st;
  return out;
}

/// Stable presentation order: by size, then lexicographic predicate ids.
inline void sort_discoveries(std::vector<Discovery>& ds) {
  std::sort(ds.begin(), ds.end(), [](const Discovery& a, const Discovery& b) {
    if (a.hitting_set.size() != b.hitting_set.size()) return a.hitting_set.size() < b.hitting_set.size();
    return a.hitting_set < b.hitting_set;
  });
}

}  // namespace adcminer
