#include "wsptm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "wsptm/errors.hpp"

namespace wsptm {

std::vector<int> classify(const Matrix& theta) {
  std::vector<int> labels(theta.rows());
  for (std::size_t d = 0; d < theta.rows(); ++d) {
    const auto row = theta.row(d);
    labels[d] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return labels;
}

std::vector<int> classify(const Matrix& theta, const std::vector<int>& doc_ids) {
  std::vector<int> labels(doc_ids.size());
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    const auto row = theta.row(doc_ids[i]);
    labels[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return labels;
}

F1Scores f1_scores(const std::vector<int>& pred, const std::vector<int>& gold, int k) {
  if (pred.size() != gold.size()) throw InputError("prediction/gold length mismatch");
  F1Scores scores;
  scores.confusion = Matrix(k, k);
  for (std::size_t i = 0; i < pred.size(); ++i) scores.confusion(gold[i], pred[i]) += 1.0;

  double tp_total = 0.0, fp_total = 0.0, fn_total = 0.0;
  scores.per_class.resize(k, 0.0);
  for (int c = 0; c < k; ++c) {
    const double tp = scores.confusion(c, c);
    double fp = 0.0, fn = 0.0;
    for (int o = 0; o < k; ++o) {
      if (o == c) continue;
      fp += scores.confusion(o, c);
      fn += scores.confusion(c, o);
    }
    const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    scores.per_class[c] =
        precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    tp_total += tp;
    fp_total += fp;
    fn_total += fn;
  }
  const double micro_p = tp_total + fp_total > 0 ? tp_total / (tp_total + fp_total) : 0.0;
  const double micro_r = tp_total + fn_total > 0 ? tp_total / (tp_total + fn_total) : 0.0;
  scores.micro = micro_p + micro_r > 0 ? 2.0 * micro_p * micro_r / (micro_p + micro_r) : 0.0;
  for (double f : scores.per_class) scores.macro += f;
  scores.macro /= k;
  return scores;
}

double perplexity(const ModelState& state, const Corpus& corpus, const Matrix& alpha_prior,
                  const ModelConfig& config, int fold_in_iters) {
  const int k = state.num_labels();
  const int g = state.num_background();

  double total_loglik = 0.0;
  long long total_tokens = 0;
  int skipped = 0;

  std::vector<double> theta(k), theta_hat(g), cat_mass(k), bg_mass(g);
  for (const auto& doc : corpus.documents) {
    if (!doc.is_test) continue;
    if (doc.tf.empty()) {
      ++skipped;
      continue;
    }
    const int d = doc.id;

    // Fold-in starts from the prior mean and a flat background mixture.
    const double alpha_sum = row_sum(alpha_prior.row(d));
    for (int i = 0; i < k; ++i) theta[i] = alpha_prior(d, i) / alpha_sum;
    std::fill(theta_hat.begin(), theta_hat.end(), 1.0 / g);

    for (int it = 0; it < fold_in_iters; ++it) {
      std::fill(cat_mass.begin(), cat_mass.end(), 0.0);
      std::fill(bg_mass.begin(), bg_mass.end(), 0.0);
      for (const auto& [word, count] : doc.tf) {
        double delta = 0.0, cat_sum = 0.0, bg_sum = 0.0;
        for (int i = 0; i < k; ++i) {
          delta += theta[i] * state.gamma(word, i);
          cat_sum += theta[i] * state.phi(i, word);
        }
        for (int i = 0; i < g; ++i) bg_sum += theta_hat[i] * state.phi_hat(i, word);
        const double weight = count * state.pi[word];
        for (int i = 0; i < k; ++i)
          cat_mass[i] += weight * delta * theta[i] * state.phi(i, word) / cat_sum;
        for (int i = 0; i < g; ++i)
          bg_mass[i] += weight * (1.0 - delta) * theta_hat[i] * state.phi_hat(i, word) / bg_sum;
      }
      double cat_total = 0.0, bg_total = 0.0;
      for (double x : cat_mass) cat_total += x;
      for (double x : bg_mass) bg_total += x;
      for (int i = 0; i < k; ++i) theta[i] = (cat_mass[i] + alpha_prior(d, i)) / (cat_total + alpha_sum);
      for (int i = 0; i < g; ++i) theta_hat[i] = (bg_mass[i] + config.alpha_hat) / (bg_total + g * config.alpha_hat);
    }

    for (const auto& [word, count] : doc.tf) {
      double delta = 0.0, cat_sum = 0.0, bg_sum = 0.0;
      for (int i = 0; i < k; ++i) {
        delta += theta[i] * state.gamma(word, i);
        cat_sum += theta[i] * state.phi(i, word);
      }
      for (int i = 0; i < g; ++i) bg_sum += theta_hat[i] * state.phi_hat(i, word);
      total_loglik += count * std::log(delta * cat_sum + (1.0 - delta) * bg_sum);
    }
    total_tokens += doc.n_tokens();
  }

  if (skipped > 0)
    std::cerr << "[wsptm] perplexity: skipped " << skipped << " empty test document(s)\n";
  if (total_tokens == 0) throw InputError("no test documents with tokens; perplexity undefined");
  return std::exp(-total_loglik / static_cast<double>(total_tokens));
}

CoverageStats coverage_stats(const Matrix& df, const std::vector<std::vector<int>>& omega,
                             const std::vector<int>& gold) {
  CoverageStats stats;
  stats.total_docs = static_cast<int>(df.rows());
  const int k = static_cast<int>(df.cols());
  for (int d = 0; d < stats.total_docs; ++d) {
    bool any_marked = !omega[d].empty();
    for (int c = 0; c < k && !any_marked; ++c) any_marked = df(d, c) > 0.0;
    if (!any_marked) ++stats.non_marked;

    const int label = gold[d];
    if (label < 0) continue;
    ++stats.labeled_docs;
    const bool marked = df(d, label) > 0.0 ||
                        std::find(omega[d].begin(), omega[d].end(), label) != omega[d].end();
    if (marked) ++stats.true_marked;
  }
  return stats;
}

}  // namespace wsptm
