#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsptm/eval.hpp"
#include "wsptm/run_config.hpp"

namespace wsptm {

// Immutable precomputations shared by training, evaluation and sweeps.
struct Pipeline {
  RunConfig config;  // effective configuration (mode already applied)
  Corpus corpus;
  SeedWordSet seeds;
  SeedCounts counts;
  Matrix prototypes;       // K x V, empty when the prototype scheme is off
  Matrix gamma;            // V x K
  std::vector<double> pi;  // unit weights in baseline mode
  SupervisedPrior prior;
  DocumentGraph graph;     // present only when built with_graph

  int num_labels() const { return seeds.num_labels(); }
};

Pipeline prepare(const RunConfig& config, bool with_graph);
// Same, but reusing an already-loaded corpus and seed set.
Pipeline prepare_loaded(const RunConfig& config, Corpus corpus, SeedWordSet seeds,
                        bool with_graph);

FitResult train(const Pipeline& pipeline);

struct EvalOutcome {
  F1Scores f1;
  std::optional<double> perplexity;
  int test_docs = 0;
};

EvalOutcome evaluate_state(const Pipeline& pipeline, const ModelState& state);
std::string report_json(const Pipeline& pipeline, const EvalOutcome& outcome);

struct SweepRow {
  std::string param;
  std::string value;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> perplexity;
};

// axis: rho | tau | P | components. Grid entries are parsed per axis; an
// empty grid uses the default sweep. Every grid point is validated before
// anything runs; each point gets its own RNG stream derived from
// (rng_seed, point index) and an isolated model state.
std::vector<SweepRow> ablate(const RunConfig& base, const std::string& axis,
                             const std::vector<std::string>& grid);
std::vector<SweepRow> ablate(Pipeline& pipeline, const std::string& axis,
                             const std::vector<std::string>& grid);
std::vector<std::string> default_grid(const std::string& axis);
// `a..b` integer range, comma list, or empty (keeps the default grid).
std::vector<std::string> parse_grid(const std::string& spec);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Marked-label coverage at P = 0 and at the configured P, as JSON.
std::string stats_json(const Pipeline& pipeline);

// Supervision diagnostics: a meta line, then one JSON object per document
// with its prior row, membership row and pseudo-neighbor labels.
std::string priors_jsonl(const Pipeline& pipeline);

// splitmix64 of (base, index); distinct, reproducible per-point streams.
std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index);

}  // namespace wsptm
