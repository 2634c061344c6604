#include "wsptm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wsptm/errors.hpp"
#include "wsptm/parallel.hpp"

namespace wsptm {

void ModelConfig::validate() const {
  if (background_topics < 0) throw InputError("G must be >= 1 (or 0 for automatic)");
  if (beta <= 0 || beta_hat <= 0) throw InputError("beta and beta_hat must be > 0");
  if (alpha_hat <= 0) throw InputError("alpha_hat must be > 0");
  if (lambda < 0) throw InputError("lambda must be >= 0");
  if (kappa < 0 || kappa > 1) throw InputError("kappa must be in [0, 1]");
  if (max_iter < 1) throw InputError("max_iter must be >= 1");
  if (tol <= 0) throw InputError("tol must be > 0");
}

namespace {

// Uniform in (0, 1), never 0 or 1, built from the top 53 bits of the draw so
// the sequence is identical on every platform for a given seed.
double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

void fill_dirichlet_flat(Matrix& m, std::mt19937_64& rng) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    double sum = 0.0;
    for (double& x : row) {
      x = -std::log(unit_open(rng));
      sum += x;
    }
    for (double& x : row) x /= sum;
  }
}

// Scratch-free inner kernel shared by the E-step paths and the likelihood.
struct TokenMix {
  double delta;    // theta_d . gamma_v
  double cat_sum;  // sum_k theta_dk phi_kv
  double bg_sum;   // sum_g theta_hat_dg phi_hat_gv
};

TokenMix token_mix(const Matrix& theta, const ModelState& state, int doc, int word) {
  TokenMix mix{0.0, 0.0, 0.0};
  const auto t = theta.row(doc);
  const auto g = state.gamma.row(word);
  for (std::size_t k = 0; k < t.size(); ++k) {
    mix.delta += t[k] * g[k];
    mix.cat_sum += t[k] * state.phi(k, word);
  }
  const auto th = state.theta_hat.row(doc);
  for (std::size_t b = 0; b < th.size(); ++b) mix.bg_sum += th[b] * state.phi_hat(b, word);
  return mix;
}

int count_matrix_chunks(int topics, int vocab) {
  // Cap the per-chunk scratch matrices at ~256 MB total.
  const std::size_t per_chunk = static_cast<std::size_t>(topics) * vocab * sizeof(double);
  const std::size_t budget = 256ull << 20;
  const std::size_t chunks = per_chunk > 0 ? std::max<std::size_t>(1, budget / per_chunk) : 64;
  return static_cast<int>(std::min<std::size_t>(64, chunks));
}

}  // namespace

ModelState init_state(const Corpus& corpus, const ModelConfig& config, Matrix gamma,
                      std::vector<double> pi, std::uint64_t rng_seed) {
  const int d_count = corpus.num_docs();
  const int v = corpus.vocab_size();
  const int k = static_cast<int>(gamma.cols());
  const int g = config.resolve_background(k);

  ModelState state;
  state.gamma = std::move(gamma);
  state.pi = std::move(pi);
  state.theta = Matrix(d_count, k);
  state.theta_hat = Matrix(d_count, g);
  state.phi = Matrix(k, v);
  state.phi_hat = Matrix(g, v);

  std::mt19937_64 rng(rng_seed);
  fill_dirichlet_flat(state.theta, rng);
  fill_dirichlet_flat(state.theta_hat, rng);
  fill_dirichlet_flat(state.phi, rng);
  fill_dirichlet_flat(state.phi_hat, rng);
  return state;
}

TokenPosterior token_posterior(const ModelState& state, int doc, int word) {
  const int k = state.num_labels();
  const int g = state.num_background();
  const TokenMix mix = token_mix(state.theta, state, doc, word);
  if (mix.cat_sum <= 0.0 || mix.bg_sum <= 0.0)
    throw InternalError("token posterior denominator vanished (unsmoothed topics?)");

  TokenPosterior post;
  post.category.resize(k);
  post.background.resize(g);
  for (int i = 0; i < k; ++i)
    post.category[i] = mix.delta * state.theta(doc, i) * state.phi(i, word) / mix.cat_sum;
  for (int i = 0; i < g; ++i)
    post.background[i] =
        (1.0 - mix.delta) * state.theta_hat(doc, i) * state.phi_hat(i, word) / mix.bg_sum;
  return post;
}

std::vector<TokenPosterior> e_step(const ModelState& state, const Document& doc) {
  std::vector<TokenPosterior> out;
  out.reserve(doc.tokens.size());
  for (int word : doc.tokens) out.push_back(token_posterior(state, doc.id, word));
  return out;
}

std::vector<std::vector<TokenPosterior>> e_step(const ModelState& state, const Corpus& corpus) {
  std::vector<std::vector<TokenPosterior>> out;
  out.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) out.push_back(e_step(state, doc));
  return out;
}

EStepCounts accumulate_e_step(const ModelState& state, const Corpus& corpus, int threads) {
  const int d_count = corpus.num_docs();
  const int k = state.num_labels();
  const int g = state.num_background();
  const int v = state.vocab_size();

  EStepCounts counts;
  counts.doc_category = Matrix(d_count, k);
  counts.doc_background = Matrix(d_count, g);
  counts.topic_word = Matrix(k, v);
  counts.background_word = Matrix(g, v);

  const int n_chunks = count_matrix_chunks(k + g, v);
  std::vector<Matrix> chunk_topic(n_chunks);
  std::vector<Matrix> chunk_background(n_chunks);

  parallel_chunks(d_count, n_chunks, threads, [&](int chunk, std::size_t begin, std::size_t end) {
    Matrix topic(k, v);
    Matrix background(g, v);
    for (std::size_t d = begin; d < end; ++d) {
      const auto& doc = corpus.documents[d];
      auto cat_row = counts.doc_category.row(d);
      auto bg_row = counts.doc_background.row(d);
      for (const auto& [word, count] : doc.tf) {
        const TokenMix mix = token_mix(state.theta, state, doc.id, word);
        const double weight = count * state.pi[word];
        const double cat_scale = mix.cat_sum > 0.0 ? weight * mix.delta / mix.cat_sum : 0.0;
        const double bg_scale = mix.bg_sum > 0.0 ? weight * (1.0 - mix.delta) / mix.bg_sum : 0.0;
        for (int i = 0; i < k; ++i) {
          const double mass = cat_scale * state.theta(doc.id, i) * state.phi(i, word);
          cat_row[i] += mass;
          topic(i, word) += mass;
        }
        for (int i = 0; i < g; ++i) {
          const double mass = bg_scale * state.theta_hat(doc.id, i) * state.phi_hat(i, word);
          bg_row[i] += mass;
          background(i, word) += mass;
        }
      }
    }
    chunk_topic[chunk] = std::move(topic);
    chunk_background[chunk] = std::move(background);
  });

  // Merge the per-chunk matrices in chunk order so the result does not depend
  // on the number of worker threads.
  for (int c = 0; c < n_chunks; ++c) {
    if (chunk_topic[c].empty()) continue;
    for (std::size_t i = 0; i < counts.topic_word.data().size(); ++i)
      counts.topic_word.data()[i] += chunk_topic[c].data()[i];
    for (std::size_t i = 0; i < counts.background_word.data().size(); ++i)
      counts.background_word.data()[i] += chunk_background[c].data()[i];
  }
  return counts;
}

void m_step_globals(const EStepCounts& counts, const ModelConfig& config, ModelState& state) {
  const int g = state.num_background();
  const int v = state.vocab_size();

  for (int d = 0; d < state.num_docs(); ++d) {
    const double denom = row_sum(counts.doc_background.row(d)) + g * config.alpha_hat;
    for (int i = 0; i < g; ++i)
      state.theta_hat(d, i) = (counts.doc_background(d, i) + config.alpha_hat) / denom;
  }
  for (int k = 0; k < state.num_labels(); ++k) {
    const double denom = row_sum(counts.topic_word.row(k)) + v * config.beta;
    for (int w = 0; w < v; ++w)
      state.phi(k, w) = (counts.topic_word(k, w) + config.beta) / denom;
  }
  for (int i = 0; i < g; ++i) {
    const double denom = row_sum(counts.background_word.row(i)) + v * config.beta_hat;
    for (int w = 0; w < v; ++w)
      state.phi_hat(i, w) = (counts.background_word(i, w) + config.beta_hat) / denom;
  }
}

Matrix init_theta(const EStepCounts& counts, const Matrix& alpha_prime) {
  const int d_count = static_cast<int>(alpha_prime.rows());
  const int k = static_cast<int>(alpha_prime.cols());
  Matrix theta(d_count, k);
  for (int d = 0; d < d_count; ++d) {
    const double denom = row_sum(counts.doc_category.row(d)) + row_sum(alpha_prime.row(d));
    for (int i = 0; i < k; ++i)
      theta(d, i) = (counts.doc_category(d, i) + alpha_prime(d, i)) / denom;
  }
  return theta;
}

namespace {

Matrix smooth_step(const Matrix& theta, const DocumentGraph& graph, double kappa) {
  Matrix out(theta.rows(), theta.cols());
  for (int d = 0; d < graph.num_docs(); ++d) {
    const auto& adj = graph.neighbors[d];
    auto dst = out.row(d);
    const auto src = theta.row(d);
    if (adj.empty()) {
      std::copy(src.begin(), src.end(), dst.begin());
      continue;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < theta.cols(); ++k) {
      double mean = 0.0;
      for (int j : adj) mean += theta(j, k);
      mean /= static_cast<double>(adj.size());
      dst[k] = (1.0 - kappa) * src[k] + kappa * mean;
      sum += dst[k];
    }
    for (double& x : dst) x /= sum;
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

ThetaUpdateResult update_theta(Matrix theta, const DocumentGraph& graph,
                               const std::function<double(const Matrix&)>& objective,
                               double kappa, int max_rounds) {
  ThetaUpdateResult res;
  res.obj_start = objective(theta);

  Matrix current = std::move(theta);
  double current_obj = res.obj_start;
  while (res.rounds < max_rounds) {
    Matrix trial = smooth_step(current, graph, kappa);
    ++res.rounds;
    const double trial_obj = objective(trial);
    if (trial_obj < current_obj) break;  // first decrease: keep the last good iterate
    const bool fixed_point = max_abs_diff(trial, current) < 1e-15;
    current = std::move(trial);
    current_obj = trial_obj;
    if (fixed_point) break;
  }
  res.theta = std::move(current);
  res.obj_end = current_obj;
  return res;
}

double token_log_likelihood(const Matrix& theta, const ModelState& state, const Corpus& corpus,
                            int threads) {
  const int n_chunks = 64;
  std::vector<double> partial(n_chunks, 0.0);
  parallel_chunks(corpus.documents.size(), n_chunks, threads,
                  [&](int chunk, std::size_t begin, std::size_t end) {
                    double sum = 0.0;
                    for (std::size_t d = begin; d < end; ++d) {
                      const auto& doc = corpus.documents[d];
                      for (const auto& [word, count] : doc.tf) {
                        const TokenMix mix = token_mix(theta, state, doc.id, word);
                        const double p =
                            mix.delta * mix.cat_sum + (1.0 - mix.delta) * mix.bg_sum;
                        sum += count * state.pi[word] * std::log(p);
                      }
                    }
                    partial[chunk] = sum;
                  });
  double total = 0.0;
  for (double x : partial) total += x;
  return total;
}

namespace {

double dirichlet_log_term(const Matrix& m, const Matrix& alpha) {
  double sum = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) sum += (alpha(r, c) - 1.0) * std::log(m(r, c));
  return sum;
}

double dirichlet_log_term(const Matrix& m, double alpha) {
  if (alpha == 1.0) return 0.0;
  double sum = 0.0;
  for (double x : m.data()) sum += std::log(x);
  return (alpha - 1.0) * sum;
}

}  // namespace

double theta_objective(const Matrix& theta, const ModelState& state, const Corpus& corpus,
                       const Matrix& alpha_prime, const DocumentGraph& graph,
                       const ModelConfig& config) {
  double obj = token_log_likelihood(theta, state, corpus, config.threads);
  obj += dirichlet_log_term(theta, alpha_prime);
  if (config.lambda > 0) obj -= config.lambda * manifold_penalty(theta, graph);
  return obj;
}

ObjectiveParts objective_parts(const ModelState& state, const Corpus& corpus,
                               const Matrix& alpha_prime, const DocumentGraph& graph,
                               const ModelConfig& config) {
  ObjectiveParts parts;
  parts.lambda = config.lambda;
  parts.token_loglik = token_log_likelihood(state.theta, state, corpus, config.threads);
  parts.theta_prior = dirichlet_log_term(state.theta, alpha_prime);
  parts.theta_hat_prior = dirichlet_log_term(state.theta_hat, config.alpha_hat);
  parts.phi_prior = dirichlet_log_term(state.phi, config.beta);
  parts.phi_hat_prior = dirichlet_log_term(state.phi_hat, config.beta_hat);
  parts.penalty = manifold_penalty(state.theta, graph);
  return parts;
}

double objective(const ModelState& state, const Corpus& corpus, const Matrix& alpha_prime,
                 const DocumentGraph& graph, const ModelConfig& config) {
  return objective_parts(state, corpus, alpha_prime, graph, config).total();
}

namespace {

void check_finite(const ObjectiveParts& parts, int iter) {
  auto fail = [iter](const char* what) {
    throw InternalError("objective term `" + std::string(what) + "` is not finite at iteration " +
                        std::to_string(iter));
  };
  if (!std::isfinite(parts.token_loglik)) fail("token_loglik");
  if (!std::isfinite(parts.theta_prior)) fail("theta_prior");
  if (!std::isfinite(parts.theta_hat_prior)) fail("theta_hat_prior");
  if (!std::isfinite(parts.phi_prior)) fail("phi_prior");
  if (!std::isfinite(parts.phi_hat_prior)) fail("phi_hat_prior");
  if (!std::isfinite(parts.penalty)) fail("penalty");
}

}  // namespace

FitResult fit(const Corpus& corpus, const SupervisedPrior& prior, const DocumentGraph& graph,
              Matrix gamma, std::vector<double> pi, const ModelConfig& config,
              const FitObserver& observer) {
  config.validate();

  FitResult result;
  result.state = init_state(corpus, config, std::move(gamma), std::move(pi), config.rng_seed);
  ModelState& state = result.state;

  ObjectiveParts parts = objective_parts(state, corpus, prior.alpha_prime, graph, config);
  check_finite(parts, 0);
  result.trace.push_back({0, parts.total(), parts.penalty, 0.0, 0.0});

  double prev_obj = parts.total();
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    const EStepCounts counts = accumulate_e_step(state, corpus, config.threads);
    m_step_globals(counts, config, state);

    Matrix theta0 = init_theta(counts, prior.alpha_prime);
    auto accept_obj = [&](const Matrix& candidate) {
      return theta_objective(candidate, state, corpus, prior.alpha_prime, graph, config);
    };
    ThetaUpdateResult upd = update_theta(std::move(theta0), graph, accept_obj, config.kappa);
    state.theta = std::move(upd.theta);

    parts = objective_parts(state, corpus, prior.alpha_prime, graph, config);
    check_finite(parts, iter);
    result.trace.push_back({iter, parts.total(), parts.penalty, upd.obj_start, upd.obj_end});
    result.iterations = iter;
    if (observer) observer(iter, state);

    const double obj = parts.total();
    if (std::abs(obj - prev_obj) < config.tol * std::abs(obj)) {
      result.converged = true;
      break;
    }
    prev_obj = obj;
  }
  return result;
}

}  // namespace wsptm
