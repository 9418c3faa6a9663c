#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcminer/approx.hpp"
#include "adcminer/dataset.hpp"
#include "adcminer/error.hpp"
#include "adcminer/evidence.hpp"
#include "adcminer/evidence_cache.hpp"
#include "adcminer/hitting_enum.hpp"
#include "adcminer/predicate_space.hpp"
#include "adcminer/sampling.hpp"

namespace adcminer {

enum class OutputFormat { Text, Jsonl };

struct RunConfig {
  std::string input;
  bool has_header = true;
  std::string null_token;
  ApproxKind function = ApproxKind::F1;
  double epsilon = 0.01;
  double sample_fraction = 1.0;
  double alpha = 0.025;
  std::uint64_t seed = 0;
  double common_threshold = 0.3;
  std::string output;
  OutputFormat format = OutputFormat::Text;
  unsigned threads = 1;
  std::string evidence_cache;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitData = 3, kExitInternal = 4 };

inline void validate(const RunConfig& c) {
  if (c.input.empty()) throw ConfigError("--input is required");
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) throw ConfigError("epsilon must be in [0, 1]");
  if (!(c.common_threshold >= 0.0 && c.common_threshold <= 1.0))
    throw ConfigError("common-value threshold must be in [0, 1]");
  if (!(c.sample_fraction > 0.0 && c.sample_fraction <= 1.0)) throw ConfigError("sample fraction must be in (0, 1]");
  if (!(c.alpha > 0.0 && c.alpha < 0.5)) throw ConfigError("alpha must be in (0, 0.5)");
  if (c.threads == 0) throw ConfigError("threads must be at least 1");
}

/// Extra per-constraint numbers for sample-based acceptance.
struct SampleDiagnostics {
  double p_hat = 0.0;
  std::uint64_t n = 0;
  double halfwidth = 0.0;
  bool accepted = false;
};

/// `¬(p₁ ∧ p₂ ∧ …)` for the DC whose complement set is h, with predicates
/// in the order of h.
inline std::string render_dc(const PredicateSpace& ps, std::span<const PredicateId> h) {
  if (h.empty()) throw std::invalid_argument("empty hitting set gives the trivial DC");
  std::string out = "¬(";
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += " ∧ ";
    out += ps.render(ps.complement(h[i]));
  }
  out += ")";
  return out;
}

/// JSON record for one emitted DC.
inline nlohmann::json dc_record(const PredicateSpace& ps, std::span<const PredicateId> h, const Discovery& d,
                                const std::optional<SampleDiagnostics>& sample = std::nullopt) {
  nlohmann::json preds = nlohmann::json::array();
  for (PredicateId id : h) {
    const auto& p = ps.predicate(ps.complement(id));
    preds.push_back({{"left", ps.column_names()[p.left_column]},
                     {"op", std::string(symbol(p.op))},
                     {"right", ps.column_names()[p.right_column]},
                     {"pattern", p.pattern == Pattern::CrossTuple ? "cross" : "same"}});
  }
  nlohmann::json rec = {{"dc", render_dc(ps, h)},
                        {"predicates", preds},
                        {"score", d.score},
                        {"violating_pairs", d.violating_pairs},
                        {"pair_universe", d.pair_universe}};
  if (sample) {
    rec["sample"] = {{"p_hat", sample->p_hat},
                     {"n", sample->n},
                     {"halfwidth", sample->halfwidth},
                     {"decision", sample->accepted ? "accept" : "reject"}};
  }
  return rec;
}

/// Orders h so that the rendered DC lists its predicates by ascending id.
inline std::vector<PredicateId> dc_order(const PredicateSpace& ps, std::vector<PredicateId> h) {
  std::sort(h.begin(), h.end(),
            [&](PredicateId a, PredicateId b) { return ps.complement(a) < ps.complement(b); });
  return h;
}

/// One line of output for a discovery, without the trailing newline.
inline std::string emit_dc(const PredicateSpace& ps, const Discovery& d, OutputFormat format,
                           const std::optional<SampleDiagnostics>& sample = std::nullopt) {
  const auto h = dc_order(ps, d.hitting_set);
  if (format == OutputFormat::Text) return render_dc(ps, h);
  return dc_record(ps, h, d, sample).dump();
}

struct PhaseTimes {
  double load = 0, predicates = 0, sample = 0, evidence = 0, enumerate = 0;
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<Discovery> discoveries;
  std::vector<std::string> lines;
  std::size_t predicate_count = 0;
  std::size_t distinct_evidence = 0;
  std::uint64_t pair_universe = 0;
  std::size_t rows_used = 0;
  EnumStats enum_stats;
  PhaseTimes times;
};

namespace detail {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline Evidence obtain_evidence(const Dataset& data, const PredicateSpace& ps, const RunConfig& cfg, bool need_vios,
                                std::ostream& log) {
  if (!cfg.evidence_cache.empty() && std::filesystem::exists(cfg.evidence_cache)) {
    Evidence ev = load_evidence(cfg.evidence_cache);
    const bool matches = ev.set.predicate_count() == ps.size() && ev.set.tuple_count() == data.row_count() &&
                         (!need_vios || ev.vios.set_count() == ev.set.distinct_count());
    if (matches) {
      log << "info: evidence loaded from cache " << cfg.evidence_cache << "\n";
      return ev;
    }
    log << "warning: evidence cache " << cfg.evidence_cache << " does not match this input; rebuilding\n";
  }
  EvidenceOptions opts;
  opts.threads = cfg.threads;
  opts.with_vios = need_vios;
  Evidence ev = build_evidence(data, ps, opts);
  if (!cfg.evidence_cache.empty()) save_evidence(cfg.evidence_cache, ev);
  return ev;
}

}  // namespace detail

/// The full mining pipeline: ingest, predicate space, optional sample,
/// evidence, enumeration, emission. DC lines and a stats footer go to
/// `out`; warnings and phase timings go to `log`.
inline RunResult run_pipeline(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  validate(cfg);
  RunResult res;
  detail::Stopwatch clock;

  const Dataset full = load_csv(cfg.input, CsvOptions{cfg.has_header, cfg.null_token});
  if (full.column_count() == 0) throw DataError("input has no columns");
  res.times.load = clock.lap();

  const PredicateSpace ps = generate_predicate_space(full, cfg.common_threshold);
  res.predicate_count = ps.size();
  res.times.predicates = clock.lap();

  const bool sampled = cfg.sample_fraction < 1.0;
  const Dataset data = sampled ? draw_sample(full, SampleSpec{cfg.sample_fraction, cfg.seed}) : full;
  res.rows_used = data.row_count();
  res.times.sample = clock.lap();
  if (sampled && cfg.function != ApproxKind::F1) {
    log << "NOTICE: sampling with " << to_string(cfg.function)
        << " carries no statistical guarantee; the function is evaluated on the sample at the given epsilon\n";
  }

  const bool need_vios = cfg.function != ApproxKind::F1;
  const Evidence ev = detail::obtain_evidence(data, ps, cfg, need_vios, log);
  res.distinct_evidence = ev.set.distinct_count();
  res.pair_universe = ev.set.pair_universe();
  res.times.evidence = clock.lap();

  std::unique_ptr<ApproxFunction> f;
  if (sampled && cfg.function == ApproxKind::F1) {
    f = std::make_unique<SampledF1Function>(ev.set, cfg.alpha);
  } else {
    f = make_approx(cfg.function, ev);
  }

  AdcEnumerator en(ev.set, ps, *f, cfg.epsilon);
  res.enum_stats = en.run([&](const Discovery& d) {
    res.discoveries.push_back(d);
    return true;
  });
  res.times.enumerate = clock.lap();
  sort_discoveries(res.discoveries);

  if (res.enum_stats.empty_accepted)
    log << "warning: epsilon exceeds total violation rate; empty DC accepted\n";
  if (auto* f3 = dynamic_cast<F3GreedyFunction*>(f.get()); f3 && f3->prefilter_rejections() > 0)
    log << "info: 2-epsilon prefilter overrode " << f3->prefilter_rejections() << " greedy f3 acceptances\n";

  for (const auto& d : res.discoveries) {
    std::optional<SampleDiagnostics> diag;
    if (sampled && cfg.function == ApproxKind::F1) {
      const auto est = estimate_p(ev.set, PredicateBitset::from_indices(ps.size(), d.hitting_set));
      diag = SampleDiagnostics{est.p_hat, est.n, normal_ci_halfwidth(est.p_hat, est.n, cfg.alpha),
                               accept_on_sample(est, cfg.epsilon, cfg.alpha)};
    }
    res.lines.push_back(emit_dc(ps, d, cfg.format, diag));
  }

  for (const auto& line : res.lines) out << line << '\n';
  nlohmann::json stats = {{"dcs", res.discoveries.size()},
                          {"rows", full.row_count()},
                          {"rows_used", res.rows_used},
                          {"predicates", res.predicate_count},
                          {"distinct_evidence_sets", res.distinct_evidence},
                          {"pair_universe", res.pair_universe},
                          {"function", std::string(to_string(cfg.function))},
                          {"epsilon", cfg.epsilon},
                          {"iterations", res.enum_stats.iterations}};
  if (cfg.format == OutputFormat::Text) {
    out << "# stats " << stats.dump() << '\n';
  } else {
    out << nlohmann::json{{"stats", stats}}.dump() << '\n';
  }

  nlohmann::json timing = {{"load_s", res.times.load},
                           {"predicates_s", res.times.predicates},
                           {"sample_s", res.times.sample},
                           {"evidence_s", res.times.evidence},
                           {"enumerate_s", res.times.enumerate}};
  log << "timing " << timing.dump() << '\n';
  return res;
}

/// run_pipeline with exit-code mapping and --output handling.
inline RunResult run(const RunConfig& cfg, std::ostream& log = std::cerr) {
  RunResult res;
  try {
    if (cfg.output.empty()) {
      res = run_pipeline(cfg, std::cout, log);
    } else {
      validate(cfg);
      std::ofstream file(cfg.output, std::ios::binary | std::ios::trunc);
      if (!file) throw ConfigError("cannot open output file: " + cfg.output);
      res = run_pipeline(cfg, file, log);
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    res.exit_code = kExitConfig;
  } catch (const DataError& e) {
    log << "data error: " << e.what() << '\n';
    res.exit_code = kExitData;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << '\n';
    res.exit_code = kExitInternal;
  }
  return res;
}

}  // namespace adcminer
