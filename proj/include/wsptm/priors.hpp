#pragma once

#include <vector>

#include "wsptm/corpus.hpp"
#include "wsptm/matrix.hpp"

namespace wsptm {

struct PriorConfig {
  double eta = 10.0;            // concentration of the supervision mass
  double alpha0 = 0.01;         // smoothing floor
  double rho = 0.9;             // weight of the label frequency prior
  double tau = 0.1;             // weight of the pseudo-neighbor term
  int pseudo_neighbors = 1;     // P; 0 disables the prototype scheme
  double epsilon = 0.01;        // relevance floor
  double proto_base = 1.718281828459045;  // e - 1

  // Range checks; requires tau = 0 when the prototype scheme is off.
  void validate(int num_labels) const;
};

// Word/seed co-occurrence counts, K x V. A word co-occurring with label k's
// seeds contributes that document's seed-token count of k, once per document
// containing the word.
Matrix seed_word_cooccurrence(const Corpus& corpus, const SeedWordSet& seeds);

// Relevance degree between each word and each category, V x K.
// u_vk = max(SC_vk / sum_i SC_vi - 1/K, 0), column-normalized over words,
// then gamma_vk = max(u_vk / sum_i u_vi, epsilon). Words with no seed
// co-occurrence at all get a uniform row at epsilon.
Matrix relevance_from_cooccurrence(const Matrix& sf, double epsilon);
Matrix compute_relevance(const Corpus& corpus, const SeedWordSet& seeds, double epsilon);

// Prototype vector per category, K x V:
// c_kv = b^(SF_kv / S_k) * ln(K / CF_v), CF_v = #labels with SF_kv > 0;
// words with CF_v = 0 get zero in every row.
Matrix prototypes_from_cooccurrence(const Matrix& sf, const std::vector<double>& seed_totals,
                                    double b);
Matrix compute_prototypes(const Corpus& corpus, const SeedWordSet& seeds, double b);

// Top-P categories by cosine similarity between each document's term
// frequency vector and the prototype rows; ties broken by lower label id.
// P = 0 yields empty lists.
std::vector<std::vector<int>> find_pseudo_neighbors(const Corpus& corpus,
                                                    const Matrix& prototypes, int p);

// Label membership degree, D x K:
// M_dk = (1 - tau) * DF_dk / sum_i DF_di + tau * I(k in Omega_d) / P.
// Documents without any seed token put all mass on the neighbor term while
// the scheme is active (P >= 1 and tau > 0) and get an all-zero row when it
// is off.
Matrix membership_degree(const Matrix& df, const std::vector<std::vector<int>>& omega, double tau,
                         int p);

// Corpus-level label frequency estimate from seed-token mass, length K.
std::vector<double> label_frequency(const std::vector<double>& tf, const SeedWordSet& seeds);

// alpha'_dk = eta * ((1 - rho) * M_dk + rho * F_k) + alpha0.
Matrix supervised_alpha(const Matrix& membership, const std::vector<double>& label_freq,
                        const PriorConfig& config);

// alpha_dk = eta * DF_dk / sum_i DF_di + alpha0; all-zero rows stay at alpha0.
Matrix baseline_alpha(const Matrix& df, double eta, double alpha0);

// pi_v = -ln(TF_v / total_tokens).
std::vector<double> compute_term_weights(const std::vector<double>& tf, double total_tokens);

struct SupervisedPrior {
  Matrix alpha_prime;                   // D x K
  Matrix membership;                    // M, D x K
  std::vector<double> label_freq;       // F, length K
  std::vector<std::vector<int>> omega;  // pseudo-neighbor labels per document
};

SupervisedPrior build_supervised_prior(const Corpus& corpus, const SeedWordSet& seeds,
                                       const SeedCounts& counts, const Matrix& prototypes,
                                       const PriorConfig& config);

}  // namespace wsptm
