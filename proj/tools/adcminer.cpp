// adcminer: mine minimal approximate denial constraints from a CSV file.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adcminer/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace adcminer;

  RunConfig cfg;
  std::string function = "f1";
  std::string format = "text";

  CLI::App app{"Discover minimal approximate denial constraints in tabular data"};
  app.add_option("-i,--input", cfg.input, "CSV file to mine")->required();
  app.add_flag("--header,!--no-header", cfg.has_header, "First row holds column names (default: yes)");
  app.add_option("--null", cfg.null_token, "Cell text treated as null (default: empty cell)");
  app.add_option("-f,--function", function, "Approximation function")
      ->check(CLI::IsMember({"f1", "f2", "f3"}))
      ->capture_default_str();
  app.add_option("-e,--epsilon", cfg.epsilon, "Approximation threshold in [0, 1]")->capture_default_str();
  app.add_option("--sample", cfg.sample_fraction, "Fraction of rows to sample, in (0, 1]")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Tail probability for the sample confidence bound")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  app.add_option("--common-threshold", cfg.common_threshold,
                 "Minimum shared-value ratio for cross-column predicates")
      ->capture_default_str();
  app.add_option("-o,--output", cfg.output, "Write constraints here instead of stdout");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "jsonl"}))
      ->capture_default_str();
  app.add_option("-j,--threads", cfg.threads, "Threads for evidence construction")->capture_default_str();
  app.add_option("--evidence-cache", cfg.evidence_cache, "Binary evidence cache (read if present, else written)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  cfg.function = *parse_approx_kind(function);
  cfg.format = format == "jsonl" ? OutputFormat::Jsonl : OutputFormat::Text;
  return run(cfg, std::cerr).exit_code;
}
