#include "wsptm/graph.hpp"

#include <algorithm>
#include <cmath>

#include "wsptm/errors.hpp"
#include "wsptm/parallel.hpp"

namespace wsptm {

long long DocumentGraph::num_edges() const {
  long long total = 0;
  for (const auto& adj : neighbors) total += static_cast<long long>(adj.size());
  return total / 2;
}

DocumentGraph build_document_graph(const Corpus& corpus, const GraphOptions& opts) {
  const int d_count = corpus.num_docs();
  const int k = opts.k_neighbors;
  if (k < 1) throw InputError("k_neighbors must be >= 1");
  if (d_count < k + 1)
    throw InputError("need at least k_neighbors + 1 documents to build the graph");

  // Optional idf reweighting of the term vectors.
  std::vector<double> weight(corpus.vocab_size(), 1.0);
  if (opts.tfidf) {
    std::vector<int> df(corpus.vocab_size(), 0);
    for (const auto& doc : corpus.documents)
      for (const auto& [word, count] : doc.tf) ++df[word];
    for (int v = 0; v < corpus.vocab_size(); ++v)
      weight[v] = std::log(static_cast<double>(d_count) / df[v]);
  }

  std::vector<double> norm(d_count, 0.0);
  for (const auto& doc : corpus.documents) {
    double s = 0.0;
    for (const auto& [word, count] : doc.tf) {
      const double x = count * weight[word];
      s += x * x;
    }
    norm[doc.id] = std::sqrt(s);
  }

  // Postings lists: word -> (doc, weighted count).
  std::vector<std::vector<std::pair<int, double>>> postings(corpus.vocab_size());
  for (const auto& doc : corpus.documents)
    for (const auto& [word, count] : doc.tf)
      postings[word].push_back({doc.id, count * weight[word]});

  std::vector<std::vector<int>> top(d_count);
  parallel_chunks(d_count, 64, opts.threads, [&](int, std::size_t begin, std::size_t end) {
    std::vector<double> dot(d_count);
    for (std::size_t q = begin; q < end; ++q) {
      const auto& doc = corpus.documents[q];
      std::fill(dot.begin(), dot.end(), 0.0);
      for (const auto& [word, count] : doc.tf) {
        const double x = count * weight[word];
        for (const auto& [other, y] : postings[word]) dot[other] += x * y;
      }
      std::vector<std::pair<double, int>> scored;
      scored.reserve(d_count - 1);
      for (int other = 0; other < d_count; ++other) {
        if (other == static_cast<int>(q)) continue;
        const double denom = norm[q] * norm[other];
        scored.push_back({denom > 0.0 ? dot[other] / denom : 0.0, other});
      }
      // Highest similarity first, lower document id on ties.
      std::partial_sort(scored.begin(), scored.begin() + k, scored.end(),
                        [](const auto& a, const auto& b) {
                          return a.first != b.first ? a.first > b.first : a.second < b.second;
                        });
      auto& t = top[q];
      t.reserve(k);
      for (int i = 0; i < k; ++i) t.push_back(scored[i].second);
    }
  });

  // Symmetrize: an edge exists when either endpoint selected the other.
  std::vector<std::vector<int>> adj(d_count);
  for (int d = 0; d < d_count; ++d)
    for (int other : top[d]) {
      adj[d].push_back(other);
      adj[other].push_back(d);
    }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  DocumentGraph graph;
  graph.neighbors = std::move(adj);
  return graph;
}

double manifold_penalty(const Matrix& theta, const DocumentGraph& graph) {
  double penalty = 0.0;
  for (int i = 0; i < graph.num_docs(); ++i) {
    for (int j : graph.neighbors[i]) {
      if (j <= i) continue;  // count each unordered pair once; 1/2 * both orderings
      const auto a = theta.row(i);
      const auto b = theta.row(j);
      for (std::size_t t = 0; t < theta.cols(); ++t) {
        const double diff = a[t] - b[t];
        penalty += diff * diff;
      }
    }
  }
  return penalty;
}

}  // namespace wsptm
