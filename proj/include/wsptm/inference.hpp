#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wsptm/corpus.hpp"
#include "wsptm/graph.hpp"
#include "wsptm/matrix.hpp"
#include "wsptm/priors.hpp"

namespace wsptm {

struct ModelConfig {
  int background_topics = 0;  // G; 0 means "same as the number of labels"
  double beta = 0.01;         // Dirichlet smoothing of category topics
  double beta_hat = 0.01;     // Dirichlet smoothing of background topics
  double alpha_hat = 0.1;     // Dirichlet prior of document-background mixtures
  double lambda = 100.0;      // manifold regularization strength
  double kappa = 0.1;         // step size of the neighbor-smoothing update
  int max_iter = 200;
  double tol = 1e-5;          // relative objective change at convergence
  std::uint64_t rng_seed = 42;
  int threads = 0;

  void validate() const;
  int resolve_background(int num_labels) const {
    return background_topics > 0 ? background_topics : num_labels;
  }
};

struct ModelState {
  Matrix theta;      // D x K, document-category mixtures
  Matrix theta_hat;  // D x G, document-background mixtures
  Matrix phi;        // K x V, category topics
  Matrix phi_hat;    // G x V, background topics
  Matrix gamma;      // V x K, word-category relevance, frozen during fitting
  std::vector<double> pi;  // length V term weights, frozen during fitting

  int num_docs() const { return static_cast<int>(theta.rows()); }
  int num_labels() const { return static_cast<int>(theta.cols()); }
  int num_background() const { return static_cast<int>(theta_hat.cols()); }
  int vocab_size() const { return static_cast<int>(phi.cols()); }
};

// All rows drawn from a flat Dirichlet; identical seeds give identical state.
ModelState init_state(const Corpus& corpus, const ModelConfig& config, Matrix gamma,
                      std::vector<double> pi, std::uint64_t rng_seed);

// Posterior topic responsibilities of one word token. The category block sums
// to delta = theta_d . gamma_v and the background block to 1 - delta:
//   N_k    = delta * theta_dk phi_kv / sum_i theta_di phi_iv
//   Nhat_g = (1 - delta) * theta_hat_dg phi_hat_gv / sum_i theta_hat_di phi_hat_iv
struct TokenPosterior {
  std::vector<double> category;    // length K
  std::vector<double> background;  // length G
};

TokenPosterior token_posterior(const ModelState& state, int doc, int word);
std::vector<TokenPosterior> e_step(const ModelState& state, const Document& doc);
std::vector<std::vector<TokenPosterior>> e_step(const ModelState& state, const Corpus& corpus);

// Term-weighted posterior mass, accumulated once per pass over the corpus.
struct EStepCounts {
  Matrix doc_category;     // D x K: sum_n pi(w_dn) N_dnk
  Matrix doc_background;   // D x G
  Matrix topic_word;       // K x V
  Matrix background_word;  // G x V
};

EStepCounts accumulate_e_step(const ModelState& state, const Corpus& corpus, int threads);

// Closed-form updates of theta_hat, phi and phi_hat from weighted counts.
void m_step_globals(const EStepCounts& counts, const ModelConfig& config, ModelState& state);

// Starting point of the theta update: weighted counts plus the supervised
// Dirichlet prior, row-normalized.
Matrix init_theta(const EStepCounts& counts, const Matrix& alpha_prime);

// Neighbor-smoothing loop: repeatedly move theta toward the graph-neighbor
// mean (step size kappa) while the objective does not decrease; returns the
// last accepted iterate. Rows of isolated documents are left unchanged.
struct ThetaUpdateResult {
  Matrix theta;
  double obj_start = 0.0;  // objective at the initial theta
  double obj_end = 0.0;    // objective at the returned theta
  int rounds = 0;          // smoothing steps evaluated
};

ThetaUpdateResult update_theta(Matrix theta, const DocumentGraph& graph,
                               const std::function<double(const Matrix&)>& objective,
                               double kappa, int max_rounds = 50);

// Regularized log posterior, split into its summands. `total` is
// token_loglik + all prior terms - lambda * penalty. Dirichlet prior terms
// omit their normalizing constants, which are fixed once the priors are.
struct ObjectiveParts {
  double token_loglik = 0.0;
  double theta_prior = 0.0;
  double theta_hat_prior = 0.0;
  double phi_prior = 0.0;
  double phi_hat_prior = 0.0;
  double penalty = 0.0;
  double lambda = 0.0;

  double total() const {
    return token_loglik + theta_prior + theta_hat_prior + phi_prior + phi_hat_prior -
           lambda * penalty;
  }
};

// pi-weighted mixture log likelihood of the corpus with `theta` substituted
// for the state's theta.
double token_log_likelihood(const Matrix& theta, const ModelState& state, const Corpus& corpus,
                            int threads);

// The theta-dependent part of the objective; the accept test of the
// neighbor-smoothing loop runs on this.
double theta_objective(const Matrix& theta, const ModelState& state, const Corpus& corpus,
                       const Matrix& alpha_prime, const DocumentGraph& graph,
                       const ModelConfig& config);

ObjectiveParts objective_parts(const ModelState& state, const Corpus& corpus,
                               const Matrix& alpha_prime, const DocumentGraph& graph,
                               const ModelConfig& config);
double objective(const ModelState& state, const Corpus& corpus, const Matrix& alpha_prime,
                 const DocumentGraph& graph, const ModelConfig& config);

struct FitTraceRow {
  int iter = 0;
  double objective = 0.0;
  double penalty = 0.0;
  double theta_obj_start = 0.0;  // accept-test objective at the Eq-start theta
  double theta_obj_end = 0.0;    // accept-test objective at the accepted theta
};

struct FitResult {
  ModelState state;
  std::vector<FitTraceRow> trace;  // row 0 is the initial state
  int iterations = 0;
  bool converged = false;
};

using FitObserver = std::function<void(int iter, const ModelState& state)>;

// Full generalized-EM loop: E-step, closed-form global updates, supervised
// theta re-initialization and the neighbor-smoothing accept loop, until the
// relative objective change falls below tol or max_iter is reached.
FitResult fit(const Corpus& corpus, const SupervisedPrior& prior, const DocumentGraph& graph,
              Matrix gamma, std::vector<double> pi, const ModelConfig& config,
              const FitObserver& observer = {});

}  // namespace wsptm
