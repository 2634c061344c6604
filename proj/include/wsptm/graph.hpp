#pragma once

#include <vector>

#include "wsptm/corpus.hpp"
#include "wsptm/matrix.hpp"

namespace wsptm {

// Symmetric binary neighbor graph over documents: i and j are connected when
// either is in the other's top-k cosine neighbor set.
struct DocumentGraph {
  std::vector<std::vector<int>> neighbors;  // sorted adjacency lists, no self loops

  int num_docs() const { return static_cast<int>(neighbors.size()); }
  int degree(int d) const { return static_cast<int>(neighbors[d].size()); }
  long long num_edges() const;
};

struct GraphOptions {
  int k_neighbors = 5;
  bool tfidf = false;  // weight term frequencies by ln(D / df) before cosine
  int threads = 0;
};

DocumentGraph build_document_graph(const Corpus& corpus, const GraphOptions& opts);

// Smoothness penalty of theta over the graph:
// R(theta) = 1/2 * sum_k sum_{i,j} (theta_ik - theta_jk)^2 W_ij.
double manifold_penalty(const Matrix& theta, const DocumentGraph& graph);

}  // namespace wsptm
