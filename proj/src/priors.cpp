#include "wsptm/priors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "wsptm/errors.hpp"

namespace wsptm {

void PriorConfig::validate(int num_labels) const {
  if (eta <= 0) throw InputError("eta must be > 0");
  if (alpha0 <= 0) throw InputError("alpha0 must be > 0");
  if (rho < 0 || rho > 1) throw InputError("rho must be in [0, 1]");
  if (tau < 0 || tau > 1) throw InputError("tau must be in [0, 1]");
  if (epsilon <= 0) throw InputError("epsilon must be > 0");
  if (proto_base <= 0) throw InputError("proto_base must be > 0");
  if (pseudo_neighbors < 0) throw InputError("P must be >= 0");
  if (num_labels > 0 && pseudo_neighbors > num_labels)
    throw InputError("P must not exceed the number of labels");
  if (pseudo_neighbors == 0 && tau != 0)
    throw InputError("tau must be 0 when P = 0 (prototype scheme disabled)");
}

Matrix seed_word_cooccurrence(const Corpus& corpus, const SeedWordSet& seeds) {
  const int k = seeds.num_labels();
  const int v = corpus.vocab_size();
  Matrix sf(k, v);

  std::vector<std::vector<int>> labels_of(v);
  for (int label = 0; label < k; ++label)
    for (int id : seeds.sets[label]) labels_of[id].push_back(label);

  std::vector<double> doc_seed(k);
  for (const auto& doc : corpus.documents) {
    std::fill(doc_seed.begin(), doc_seed.end(), 0.0);
    for (const auto& [word, count] : doc.tf)
      for (int label : labels_of[word]) doc_seed[label] += count;
    for (int label = 0; label < k; ++label) {
      if (doc_seed[label] == 0.0) continue;
      for (const auto& [word, count] : doc.tf) sf(label, word) += doc_seed[label];
    }
  }
  return sf;
}

Matrix relevance_from_cooccurrence(const Matrix& sf, double epsilon) {
  const int k = static_cast<int>(sf.rows());
  const int v = static_cast<int>(sf.cols());
  Matrix u(v, k);

  for (int word = 0; word < v; ++word) {
    double total = 0.0;
    for (int label = 0; label < k; ++label) total += sf(label, word);
    if (total == 0.0) continue;
    for (int label = 0; label < k; ++label)
      u(word, label) = std::max(sf(label, word) / total - 1.0 / k, 0.0);
  }

  // Column normalization over words.
  for (int label = 0; label < k; ++label) {
    double col = 0.0;
    for (int word = 0; word < v; ++word) col += u(word, label);
    if (col == 0.0) continue;
    for (int word = 0; word < v; ++word) u(word, label) /= col;
  }

  Matrix gamma(v, k);
  for (int word = 0; word < v; ++word) {
    const double total = row_sum(u.row(word));
    for (int label = 0; label < k; ++label) {
      const double share = total > 0.0 ? u(word, label) / total : 0.0;
      gamma(word, label) = std::max(share, epsilon);
    }
  }
  return gamma;
}

Matrix compute_relevance(const Corpus& corpus, const SeedWordSet& seeds, double epsilon) {
  return relevance_from_cooccurrence(seed_word_cooccurrence(corpus, seeds), epsilon);
}

Matrix prototypes_from_cooccurrence(const Matrix& sf, const std::vector<double>& seed_totals,
                                    double b) {
  const int k = static_cast<int>(sf.rows());
  const int v = static_cast<int>(sf.cols());
  for (int label = 0; label < k; ++label)
    if (seed_totals[label] <= 0.0)
      throw InputError("label " + std::to_string(label) +
                       " has no seed occurrences in the corpus; prototype undefined");

  Matrix proto(k, v);
  for (int word = 0; word < v; ++word) {
    int cf = 0;
    for (int label = 0; label < k; ++label)
      if (sf(label, word) > 0.0) ++cf;
    if (cf == 0) continue;  // no category evidence for this word
    const double discrim = std::log(static_cast<double>(k) / cf);
    for (int label = 0; label < k; ++label)
      proto(label, word) = std::pow(b, sf(label, word) / seed_totals[label]) * discrim;
  }
  return proto;
}

Matrix compute_prototypes(const Corpus& corpus, const SeedWordSet& seeds, double b) {
  const Matrix sf = seed_word_cooccurrence(corpus, seeds);
  std::vector<double> totals(seeds.num_labels(), 0.0);
  const SeedCounts counts = count_seed_occurrences(corpus, seeds);
  for (int label = 0; label < seeds.num_labels(); ++label)
    for (int id : seeds.sets[label]) totals[label] += counts.tf[id];
  return prototypes_from_cooccurrence(sf, totals, b);
}

namespace {

double sparse_cosine(const std::vector<std::pair<int, int>>& tf, std::span<const double> dense) {
  double dot = 0.0, norm_tf = 0.0;
  for (const auto& [word, count] : tf) {
    dot += count * dense[word];
    norm_tf += static_cast<double>(count) * count;
  }
  double norm_dense = 0.0;
  for (double x : dense) norm_dense += x * x;
  const double denom = std::sqrt(norm_tf) * std::sqrt(norm_dense);
  return denom > 0.0 ? dot / denom : 0.0;
}

}  // namespace

std::vector<std::vector<int>> find_pseudo_neighbors(const Corpus& corpus,
                                                    const Matrix& prototypes, int p) {
  const int k = static_cast<int>(prototypes.rows());
  std::vector<std::vector<int>> omega(corpus.num_docs());
  if (p == 0) return omega;
  if (p > k) throw InputError("P exceeds the number of labels");

  std::vector<std::pair<double, int>> scored(k);
  for (const auto& doc : corpus.documents) {
    for (int label = 0; label < k; ++label)
      scored[label] = {sparse_cosine(doc.tf, prototypes.row(label)), label};
    // Highest similarity first, lower label id on ties.
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    auto& out = omega[doc.id];
    out.reserve(p);
    for (int i = 0; i < p; ++i) out.push_back(scored[i].second);
    std::sort(out.begin(), out.end());
  }
  return omega;
}

Matrix membership_degree(const Matrix& df, const std::vector<std::vector<int>>& omega, double tau,
                         int p) {
  const int d_count = static_cast<int>(df.rows());
  const int k = static_cast<int>(df.cols());
  Matrix m(d_count, k);

  const bool scheme_on = p > 0 && tau > 0.0;
  for (int d = 0; d < d_count; ++d) {
    const double seed_total = row_sum(df.row(d));
    if (seed_total > 0.0) {
      const double w = scheme_on ? 1.0 - tau : 1.0;
      for (int label = 0; label < k; ++label) m(d, label) = w * df(d, label) / seed_total;
      if (scheme_on)
        for (int label : omega[d]) m(d, label) += tau / p;
    } else if (scheme_on) {
      // No seed evidence: all membership mass goes to the pseudo-neighbors.
      for (int label : omega[d]) m(d, label) = 1.0 / p;
    }
    // Without seeds and with the scheme off the row stays all zero: the
    // document has no marked labels and its prior carries no membership mass.
  }
  return m;
}

std::vector<double> label_frequency(const std::vector<double>& tf, const SeedWordSet& seeds) {
  const int k = seeds.num_labels();
  std::vector<double> f(k, 0.0);
  for (int label = 0; label < k; ++label)
    for (int id : seeds.sets[label]) f[label] += tf[id];
  const double total = std::accumulate(f.begin(), f.end(), 0.0);
  if (total <= 0.0) throw InputError("no seed word occurs anywhere in the corpus");
  for (double& x : f) x /= total;
  return f;
}

Matrix supervised_alpha(const Matrix& membership, const std::vector<double>& label_freq,
                        const PriorConfig& config) {
  const int d_count = static_cast<int>(membership.rows());
  const int k = static_cast<int>(membership.cols());
  Matrix alpha(d_count, k);
  for (int d = 0; d < d_count; ++d)
    for (int label = 0; label < k; ++label)
      alpha(d, label) = config.eta * ((1.0 - config.rho) * membership(d, label) +
                                      config.rho * label_freq[label]) +
                        config.alpha0;
  return alpha;
}

Matrix baseline_alpha(const Matrix& df, double eta, double alpha0) {
  const int d_count = static_cast<int>(df.rows());
  const int k = static_cast<int>(df.cols());
  Matrix alpha(d_count, k, alpha0);
  for (int d = 0; d < d_count; ++d) {
    const double total = row_sum(df.row(d));
    if (total == 0.0) continue;
    for (int label = 0; label < k; ++label) {
      const double share = df(d, label) / total;  // same order as the membership route
      alpha(d, label) = eta * share + alpha0;
    }
  }
  return alpha;
}

std::vector<double> compute_term_weights(const std::vector<double>& tf, double total_tokens) {
  std::vector<double> pi(tf.size());
  for (std::size_t v = 0; v < tf.size(); ++v) {
    if (tf[v] <= 0.0) throw InputError("term weight undefined for a word with zero frequency");
    pi[v] = -std::log(tf[v] / total_tokens);
  }
  return pi;
}

SupervisedPrior build_supervised_prior(const Corpus& corpus, const SeedWordSet& seeds,
                                       const SeedCounts& counts, const Matrix& prototypes,
                                       const PriorConfig& config) {
  SupervisedPrior prior;
  prior.omega = find_pseudo_neighbors(corpus, prototypes, config.pseudo_neighbors);
  prior.membership =
      membership_degree(counts.df, prior.omega, config.tau, config.pseudo_neighbors);
  prior.label_freq = label_frequency(counts.tf, seeds);
  prior.alpha_prime = supervised_alpha(prior.membership, prior.label_freq, config);
  return prior;
}

}  // namespace wsptm
