#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "adcminer/approx.hpp"
#include "adcminer/dataset.hpp"
#include "adcminer/error.hpp"
#include "adcminer/evidence.hpp"

namespace adcminer {

/// SplitMix64: a counter advanced by a fixed odd gamma, passed through a
/// mixing function. Output depends only on the seed and the draw index.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : counter_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (counter_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) {
    __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t counter_;
};

struct SampleSpec {
  double fraction = 1.0;
  std::uint64_t seed = 0;
};

/// round(fraction · n). Throws unless fraction ∈ (0,1] and the result is ≥ 2.
inline std::size_t sample_size(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("sample fraction must be in (0, 1]");
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (k < 2) throw DataError("sample has " + std::to_string(k) + " rows; at least 2 are required");
  return std::min(k, n);
}

/// Row indices of a uniform without-replacement sample (partial
/// Fisher–Yates), returned in ascending order.
inline std::vector<std::size_t> draw_sample_indices(std::size_t n, const SampleSpec& spec) {
  const std::size_t k = sample_size(n, spec.fraction);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k < n) {
    SplitMix64 rng(spec.seed);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
  }
  return idx;
}

inline Dataset draw_sample(const Dataset& d, const SampleSpec& spec) {
  return d.select_rows(draw_sample_indices(d.row_count(), spec));
}

/// p̂ = |E_J| / n with n = |J|(|J|−1), the ordered-pair universe of the sample.
struct Estimate {
  double p_hat = 0.0;
  std::uint64_t n = 0;
  std::uint64_t violations = 0;
};

inline Estimate estimate_p(const EvidenceSet& sample_evidence, const PredicateBitset& h) {
  Estimate est;
  est.n = sample_evidence.pair_universe();
  if (est.n == 0) throw DataError("estimate needs a sample of at least 2 rows");
  est.violations = uncovered_weight(sample_evidence, h);
  est.p_hat = static_cast<double>(est.violations) / static_cast<double>(est.n);
  return est;
}

/// Chebyshev bound on Pr(|p̂ − p| > a) with no independence assumption:
/// (p/a²)·[(C + C(C−1)/2)/C² − p], C = C(n_nodes, 2), clamped to [0,1].
inline double chebyshev_tail_bound(double p, std::size_t n_nodes, double a) {
  if (!(a > 0.0)) throw ConfigError("chebyshev bound needs a > 0");
  if (n_nodes < 2) throw ConfigError("chebyshev bound needs at least 2 nodes");
  const double c = static_cast<double>(n_nodes) * static_cast<double>(n_nodes - 1) / 2.0;
  const double var_bound = p * ((c + c * (c - 1.0) / 2.0) / (c * c) - p);
  return std::clamp(var_bound / (a * a), 0.0, 1.0);
}

/// Inverse standard-normal CDF. Acklam's rational approximation refined by
/// one Halley step against erfc; absolute error well under 1e−9 on (0,1).
inline double z_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("z_quantile needs q in (0, 1)");
  if (q == 0.5) return 0.0;
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double low = 0.02425;
  double x = 0.0;
  if (q < low) {
    const double r = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (q <= 1.0 - low) {
    const double r = q - 0.5;
    const double s = r * r;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log1p(-q));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - q;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

/// z_{1−2α} · sqrt(p̂(1−p̂)/n).
inline double normal_ci_halfwidth(double p_hat, std::uint64_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("alpha must be in (0, 0.5)");
  if (n == 0) throw ConfigError("halfwidth needs n > 0");
  const double var = p_hat * (1.0 - p_hat);
  if (var <= 0.0) return 0.0;
  return z_quantile(1.0 - 2.0 * alpha) * std::sqrt(var / static_cast<double>(n));
}

/// Sample-side acceptance: (1 − p̂) ≥ halfwidth + (1 − ε).
inline bool accept_on_sample(const Estimate& est, double epsilon, double alpha) {
  return (1.0 - est.p_hat) >= normal_ci_halfwidth(est.p_hat, est.n, alpha) + (1.0 - epsilon);
}

/// f1′ = (1 − p̂) − z_{1−2α}·sqrt(p̂(1−p̂)/n).
inline double adjusted_f1(const EvidenceSet& sample_evidence, const PredicateBitset& h, double alpha) {
  const auto est = estimate_p(sample_evidence, h);
  return (1.0 - est.p_hat) - normal_ci_halfwidth(est.p_hat, est.n, alpha);
}

/// f1′ as an enumerator function. Branch pruning uses plain f1 on the
/// sample, which is monotone and never below f1′.
class SampledF1Function final : public ApproxFunction {
 public:
  SampledF1Function(const EvidenceSet& sample_evidence, double alpha) : e_(sample_evidence), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("alpha must be in (0, 0.5)");
  }
  ApproxKind kind() const override { return ApproxKind::F1; }
  bool accepts(const PredicateBitset& h, double epsilon) const override {
    return accept_on_sample(estimate_p(e_, h), epsilon, alpha_);
  }
  double score(const PredicateBitset& h) const override { return adjusted_f1(e_, h, alpha_); }
  bool prune_accepts(const PredicateBitset& h, double epsilon) const override {
    return violation_rate(e_, h) <= epsilon;
  }
  double alpha() const { return alpha_; }

 private:
  const EvidenceSet& e_;
  double alpha_;
};

}  // namespace adcminer
