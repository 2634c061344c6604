#pragma once

#include <map>
#include <string>

#include "wsptm/corpus.hpp"
#include "wsptm/graph.hpp"
#include "wsptm/inference.hpp"
#include "wsptm/priors.hpp"

namespace wsptm {

// Everything a run needs, addressable as flat key=value pairs so experiment
// records stay diff-able. Unknown keys are rejected.
struct RunConfig {
  std::string corpus_path;
  std::string seeds_path;
  std::string stopwords_path;
  std::string out_dir = ".";
  std::string mode = "wsptm";  // or "lapswtm-baseline"

  CorpusLoadOptions load{.min_doc_freq = 5, .min_word_len = 2};
  bool purify_seeds = true;
  PriorConfig prior;
  ModelConfig model;
  GraphOptions graph;
  bool eval_perplexity = true;
  int fold_in_iters = 20;

  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_kv() const;
  static RunConfig from_kv(const std::map<std::string, std::string>& kv);

  // Flat `key=value` lines; `#` starts a comment.
  void load_file(const std::string& path);
  std::string dump() const;

  bool baseline_mode() const { return mode == "lapswtm-baseline"; }

  // The configuration actually run: baseline mode forces rho = 0, tau = 0,
  // P = 0 and unit term weights.
  RunConfig effective() const;

  void validate() const;
};

}  // namespace wsptm
