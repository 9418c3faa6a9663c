#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adcminer/bitset.hpp"
#include "adcminer/dataset.hpp"

namespace adcminer::testkit {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

struct ToyShape {
  std::size_t max_rows = 8;
  std::size_t max_columns = 4;
  double null_rate = 0.0;
  /// Chance of a pair of numeric columns drawing from one shared domain,
  /// which brings cross-column and same-tuple predicates into the space.
  double overlap_chance = 0.2;
};

/// Small random relation. Columns draw from tiny, column-private domains so
/// that ties are frequent and no accidental cross-column predicates appear,
/// except for the optional overlapping numeric pair.
inline Dataset random_toy_dataset(Rng& rng, const ToyShape& shape = {}) {
  const std::size_t rows = uniform(rng, 2, shape.max_rows);
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<std::string>>> cells(rows);

  auto add_column = [&](bool numeric, std::size_t domain, int base) {
    const std::size_t c = names.size();
    names.push_back("c" + std::to_string(c));
    for (auto& row : cells) {
      if (shape.null_rate > 0 && coin(rng, shape.null_rate)) {
        row.emplace_back(std::nullopt);
        continue;
      }
      const auto v = static_cast<int>(uniform(rng, 0, domain - 1));
      row.emplace_back(numeric ? std::to_string(base + v) : "s" + std::to_string(c) + "_" + std::to_string(v));
    }
  };

  if (coin(rng, shape.overlap_chance)) {
    add_column(true, uniform(rng, 2, 3), 0);
    add_column(true, uniform(rng, 2, 3), 0);
    if (shape.max_columns > 2 && coin(rng, 0.5)) add_column(false, uniform(rng, 2, 3), 0);
  } else {
    const std::size_t k = uniform(rng, 1, shape.max_columns);
    std::size_t numeric_cols = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const bool numeric = numeric_cols < 2 && coin(rng, 0.5);
      numeric_cols += numeric;
      add_column(numeric, uniform(rng, 2, 4), static_cast<int>(1000 * (c + 1)));
    }
  }
  return Dataset::from_cells(std::move(names), cells);
}

/// Random hypergraph over elements 0..universe−1.
inline std::vector<PredicateBitset> random_family(Rng& rng, std::size_t universe, std::size_t max_sets) {
  const std::size_t m = uniform(rng, 0, max_sets);
  const double density = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
  std::vector<PredicateBitset> family;
  for (std::size_t i = 0; i < m; ++i) {
    PredicateBitset s(universe);
    for (std::size_t e = 0; e < universe; ++e)
      if (coin(rng, density)) s.set(e);
    if (s.none() && !coin(rng, 0.05)) s.set(uniform(rng, 0, universe - 1));
    family.push_back(std::move(s));
  }
  return family;
}

inline PredicateBitset random_subset(Rng& rng, std::size_t n, double density) {
  PredicateBitset s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng, density)) s.set(i);
  return s;
}

}  // namespace adcminer::testkit
