#include <gtest/gtest.h>

#include <set>
#include <unordered_set>

#include "adcminer/hitting_enum.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/table1.hpp"

namespace {

using namespace adcminer;
using testkit::IdSet;

std::set<IdSet> as_set(const std::vector<std::vector<std::uint32_t>>& v) { return {v.begin(), v.end()}; }

std::set<IdSet> as_set(const std::vector<Discovery>& ds) {
  std::set<IdSet> out;
  for (const auto& d : ds) out.insert(d.hitting_set);
  return out;
}

bool same_state(const SearchState& a, const SearchState& b) {
  auto sorted = [](std::vector<std::vector<std::uint32_t>> c) {
    for (auto& l : c) std::sort(l.begin(), l.end());
    return c;
  };
  return a.s == b.s && a.in_s == b.in_s && sorted(a.crit) == sorted(b.crit) && a.uncov == b.uncov &&
         a.cand == b.cand && a.can_hit == b.can_hit;
}

TEST(Mmcs, SmallExample) {
  Family fam = {PredicateBitset::from_indices(3, std::vector{0, 1}), PredicateBitset::from_indices(3, std::vector{1, 2})};
  EXPECT_EQ(as_set(mmcs(3, fam)), (std::set<IdSet>{{1}, {0, 2}}));
}

TEST(Mmcs, EmptyFamily) { EXPECT_EQ(as_set(mmcs(4, {})), (std::set<IdSet>{{}})); }

TEST(Mmcs, EmptyMemberHasNoHittingSet) {
  Family fam = {PredicateBitset(3), PredicateBitset::from_indices(3, std::vector{0})};
  EXPECT_TRUE(mmcs(3, fam).empty());
}

TEST(MmcsProperty, MatchesBruteForce) {
  testkit::Rng rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t universe = testkit::uniform(rng, 1, 10);
    const auto fam = testkit::random_family(rng, universe, 15);
    const auto got = mmcs(universe, fam);
    ASSERT_EQ(as_set(got).size(), got.size()) << "duplicate hitting set";
    ASSERT_EQ(as_set(got), testkit::brute_minimal_hitting_sets(universe, fam));
  }
}

class Table1Enum : public ::testing::Test {
 protected:
  Dataset d = testkit::table1();
  PredicateSpace ps = generate_predicate_space(d, 0.3);
  Evidence ev = build_evidence(d, ps);
};

TEST_F(Table1Enum, F1AtOnePercent) {
  F1Function f(ev.set);
  const auto got = as_set(adc_enum(ev.set, ps, f, 0.01));
  auto key = [&](std::vector<PredicateId> s) {
    auto h = ps.complement_set(s);
    std::sort(h.begin(), h.end());
    return IdSet(h.begin(), h.end());
  };
  EXPECT_TRUE(got.count(key(testkit::phi1(ps))));
  EXPECT_FALSE(got.count(key(testkit::phi2(ps))));
  const testkit::PairTable pairs(d, ps);
  EXPECT_EQ(got, testkit::exhaustive_minimal_adcs(pairs, ps, ApproxKind::F1, 0.01));
}

TEST_F(Table1Enum, F2MatchesOracle) {
  F2Function f(ev.set, ev.vios);
  const testkit::PairTable pairs(d, ps);
  for (double eps : {0.0, 0.1, 0.3}) {
    EXPECT_EQ(as_set(adc_enum(ev.set, ps, f, eps)), testkit::exhaustive_minimal_adcs(pairs, ps, ApproxKind::F2, eps))
        << "eps " << eps;
  }
}

TEST_F(Table1Enum, EpsilonOneAcceptsEmpty) {
  F1Function f(ev.set);
  EnumStats stats;
  EXPECT_TRUE(adc_enum(ev.set, ps, f, 1.0, &stats).empty());
  EXPECT_TRUE(stats.empty_accepted);
}

TEST_F(Table1Enum, SinkCanCancel) {
  F1Function f(ev.set);
  AdcEnumerator en(ev.set, ps, f, 0.01);
  int seen = 0;
  const auto stats = en.run([&](const Discovery&) { return ++seen < 3; });
  EXPECT_EQ(seen, 3);
  EXPECT_TRUE(stats.cancelled);
}

TEST_F(Table1Enum, IsMinimal) {
  F1Function f(ev.set);
  AdcEnumerator en(ev.set, ps, f, 0.01);
  EXPECT_TRUE(en.is_minimal(PredicateBitset(ps.size())));
  const auto h1 = testkit::hitting(ps, testkit::phi1(ps));
  EXPECT_TRUE(en.is_minimal(h1));
  auto bigger = h1;
  bigger.set(testkit::cross(ps, "Name", Operator::Eq));
  EXPECT_FALSE(en.is_minimal(bigger));
}

TEST_F(Table1Enum, UpdateCritUncovUndo) {
  SearchState st(ev.set.sets(), ps.size());
  const SearchState before = st;
  const PredicateId e = testkit::cross(ps, "State", Operator::Neq);
  const auto log = update_crit_uncov(st, e);
  for (auto f : st.crit[e]) EXPECT_TRUE(ev.set.set(f).test(e));
  EXPECT_EQ(st.crit[e].size(), log.moved.size());
  st.s.push_back(e);
  st.in_s.set(e);
  const PredicateId e2 = testkit::cross(ps, "Income", Operator::Leq);
  const auto log2 = update_crit_uncov(st, e2);
  for (auto f : st.crit[e]) EXPECT_FALSE(ev.set.set(f).test(e2));
  undo(st, log2);
  st.s.pop_back();
  st.in_s.reset(e);
  undo(st, log);
  EXPECT_TRUE(same_state(st, before));
}

TEST_F(Table1Enum, UpdateCritUncovElementInNoSet) {
  // With no nulls, "Name = " and "Name != " split every pair, so a tiny
  // family missing both is needed to see an element that hits nothing.
  Family fam = {PredicateBitset::from_indices(4, std::vector{0, 1})};
  SearchState st(fam, 4);
  const auto log = update_crit_uncov(st, 3);
  EXPECT_TRUE(st.crit[3].empty());
  EXPECT_TRUE(log.moved.empty());
}

TEST_F(Table1Enum, UpdateCanCover) {
  SearchState st(ev.set.sets(), ps.size());
  EXPECT_TRUE(update_can_cover(st).empty());
  st.cand.clear();
  const auto flipped = update_can_cover(st);
  EXPECT_EQ(flipped.size(), ev.set.distinct_count());
  for (char c : st.can_hit) EXPECT_FALSE(c);
  undo_can_cover(st, flipped);
  for (char c : st.can_hit) EXPECT_TRUE(c);
}

TEST_F(Table1Enum, WillCover) {
  F1Function f(ev.set);
  AdcEnumerator full(ev.set, ps, f, 0.0);
  EXPECT_TRUE(full.will_cover());
  AdcEnumerator none(ev.set, ps, f, 0.5);
  none.state().cand.clear();
  EXPECT_FALSE(none.will_cover());
  // S = h(φ1), cand = ∅: rate is exactly 2/210.
  AdcEnumerator edge(ev.set, ps, f, 2.0 / 210.0);
  edge.state().in_s = testkit::hitting(ps, testkit::phi1(ps));
  edge.state().cand.clear();
  EXPECT_TRUE(edge.will_cover());
}

TEST_F(Table1Enum, RemoveRedundantPreds) {
  SearchState st(ev.set.sets(), ps.size());
  const PredicateId lt = testkit::cross(ps, "Income", Operator::Lt);
  st.cand.reset(lt);
  const auto removed = remove_redundant_preds(st, ps, lt);
  EXPECT_EQ(removed.count(), 5U);
  for (Operator op : {Operator::Eq, Operator::Neq, Operator::Gt, Operator::Geq, Operator::Leq})
    EXPECT_FALSE(st.cand.test(testkit::cross(ps, "Income", op)));
  const PredicateId name_eq = testkit::cross(ps, "Name", Operator::Eq);
  st.cand.reset(name_eq);
  const auto r2 = remove_redundant_preds(st, ps, name_eq);
  EXPECT_EQ(r2.to_indices(), std::vector<std::size_t>{testkit::cross(ps, "Name", Operator::Neq)});
}

TEST_F(Table1Enum, IterationRestoresState) {
  F1Function f(ev.set);
  for (double eps : {0.0, 0.01, 0.1}) {
    AdcEnumerator en(ev.set, ps, f, eps);
    const SearchState before = en.state();
    en.iterate();
    EXPECT_TRUE(same_state(en.state(), before));
  }
}

// Checks the SearchState invariants every time something is emitted.
void check_state(const SearchState& st, const Family& fam) {
  for (std::size_t f = 0; f < fam.size(); ++f) {
    if (st.uncov.test(f)) {
      ASSERT_FALSE(fam[f].intersects(st.in_s));
    } else {
      ASSERT_TRUE(fam[f].intersects(st.in_s));
    }
  }
  for (auto e : st.s) {
    for (auto f : st.crit[e]) {
      ASSERT_TRUE(fam[f].test(e));
      auto rest = st.in_s;
      rest.reset(e);
      ASSERT_FALSE(fam[f].intersects(rest));
    }
  }
}

struct ToyCase {
  Dataset d;
  PredicateSpace ps;
  Evidence ev;
};

ToyCase toy(testkit::Rng& rng) {
  testkit::ToyShape shape;
  shape.null_rate = testkit::coin(rng, 0.15) ? 0.1 : 0.0;
  auto d = testkit::random_toy_dataset(rng, shape);
  auto ps = generate_predicate_space(d, 0.3);
  auto ev = build_evidence(d, ps);
  return {std::move(d), std::move(ps), std::move(ev)};
}

TEST(AdcEnumProperty, MatchesExhaustiveOracle) {
  testkit::Rng rng(51);
  for (int trial = 0; trial < 25; ++trial) {
    const auto c = toy(rng);
    const testkit::PairTable pairs(c.d, c.ps);
    const F1Function f1(c.ev.set);
    const F2Function f2(c.ev.set, c.ev.vios);
    for (double eps : {0.0, 0.05, 0.25}) {
      for (const ApproxFunction* f : {static_cast<const ApproxFunction*>(&f1), static_cast<const ApproxFunction*>(&f2)}) {
        AdcEnumerator en(c.ev.set, c.ps, *f, eps);
        std::vector<Discovery> got;
        std::unordered_set<PredicateBitset, PredicateBitsetHash> seen;
        en.run([&](const Discovery& d) {
          check_state(en.state(), c.ev.set.sets());
          EXPECT_TRUE(seen.insert(PredicateBitset::from_indices(c.ps.size(), d.hitting_set)).second);
          got.push_back(d);
          return true;
        });
        ASSERT_EQ(as_set(got), testkit::exhaustive_minimal_adcs(pairs, c.ps, f->kind(), eps))
            << to_string(f->kind()) << " eps " << eps << "\n"
            << to_csv(c.d);
      }
    }
  }
}

TEST(AdcEnumProperty, EpsilonZeroIsMmcs) {
  testkit::Rng rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = toy(rng);
    const F1Function f(c.ev.set);
    std::set<IdSet> want;
    for (auto& hs : mmcs(c.ps.size(), c.ev.set.sets()))
      if (testkit::one_per_group(c.ps, hs)) want.insert(hs);
    ASSERT_EQ(as_set(adc_enum(c.ev.set, c.ps, f, 0.0)), want);
  }
}

TEST(AdcEnumProperty, GreedyF3OutputsAreAcceptedAndMinimal) {
  testkit::Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = toy(rng);
    const F3GreedyFunction f(c.ev.set, c.ev.vios);
    for (double eps : {0.1, 0.3}) {
      AdcEnumerator en(c.ev.set, c.ps, f, eps);
      const auto out = adc_enum(c.ev.set, c.ps, f, eps);
      for (const auto& d : out) {
        const auto h = PredicateBitset::from_indices(c.ps.size(), d.hitting_set);
        ASSERT_TRUE(f.accepts(h, eps));
        ASSERT_TRUE(en.is_minimal(h));
        ASSERT_TRUE(testkit::one_per_group(c.ps, d.hitting_set));
      }
    }
  }
}

TEST(AdcEnum, SortDiscoveries) {
  std::vector<Discovery> ds(3);
  ds[0].hitting_set = {4, 5};
  ds[1].hitting_set = {9};
  ds[2].hitting_set = {1, 7};
  sort_discoveries(ds);
  EXPECT_EQ(ds[0].hitting_set, (std::vector<PredicateId>{9}));
  EXPECT_EQ(ds[1].hitting_set, (std::vector<PredicateId>{1, 7}));
}

}  // namespace
