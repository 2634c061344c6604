#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wsptm/corpus.hpp"
#include "wsptm/inference.hpp"

namespace testsupport {

// Reference posteriors for one document by exhaustive enumeration: every
// joint assignment of (topic kind, topic) to the document's tokens is
// weighted and per-token marginals are accumulated, with all normalizers
// summed over the enumeration rather than factorized. Exponential in the
// token count; only usable on tiny documents.
std::vector<wsptm::TokenPosterior> enumerate_posteriors(const wsptm::ModelState& state,
                                                        const wsptm::Document& doc);

// Random valid model state over the given sizes: simplex rows everywhere,
// relevance entries in [epsilon, 1], unit term weights.
wsptm::ModelState random_state(std::mt19937_64& rng, int docs, int labels, int background,
                               int vocab);

// Random corpus with dense ids; every document has at least one token.
wsptm::Corpus random_tiny_corpus(std::mt19937_64& rng, int max_docs, int max_tokens,
                                 int max_vocab);

}  // namespace testsupport
