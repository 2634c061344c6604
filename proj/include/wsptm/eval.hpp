#pragma once

#include <vector>

#include "wsptm/corpus.hpp"
#include "wsptm/inference.hpp"
#include "wsptm/matrix.hpp"

namespace wsptm {

// argmax over each theta row; ties go to the lower label id.
std::vector<int> classify(const Matrix& theta);
std::vector<int> classify(const Matrix& theta, const std::vector<int>& doc_ids);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
  std::vector<double> per_class;
  Matrix confusion;  // K x K, rows gold, columns predicted
};

// Single-label multi-class F1. Classes with no gold and no predicted
// instances contribute 0 to the macro average.
F1Scores f1_scores(const std::vector<int>& pred, const std::vector<int>& gold, int k);

// Held-out perplexity of the test documents. Document mixtures are re-fit by
// fold-in (topics frozen, no manifold term); the prior rows come from the
// same supervised machinery used in training. The reported value is
// exp(-sum_d log p(w_d) / sum_d N_d) with unweighted token probabilities.
double perplexity(const ModelState& state, const Corpus& corpus, const Matrix& alpha_prior,
                  const ModelConfig& config, int fold_in_iters);

struct CoverageStats {
  int non_marked = 0;   // documents with no marked label at all
  int true_marked = 0;  // documents whose gold label is marked
  int labeled_docs = 0;
  int total_docs = 0;
};

// A label is marked for a document when it has seed occurrences there or is
// one of the document's pseudo-neighbor categories.
CoverageStats coverage_stats(const Matrix& df, const std::vector<std::vector<int>>& omega,
                             const std::vector<int>& gold);

}  // namespace wsptm
