#include "wsptm.h"

#include <cstring>
#include <memory>
#include <string>

#include "wsptm/checkpoint.hpp"
#include "wsptm/errors.hpp"
#include "wsptm/run.hpp"

using namespace wsptm;

struct wsptm_config {
  RunConfig cfg;
};
struct wsptm_corpus {
  Corpus corpus;
};
struct wsptm_seeds {
  SeedWordSet seeds;
};
struct wsptm_model {
  Checkpoint ckpt;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return WSPTM_OK;
  } catch (const InputError& e) {
    return fail(WSPTM_ERR_INPUT, e.what());
  } catch (const CheckpointError& e) {
    return fail(WSPTM_ERR_CHECKPOINT, e.what());
  } catch (const std::exception& e) {
    return fail(WSPTM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(WSPTM_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Model parameters come from the training-time snapshot; evaluation-side
// knobs are taken from the caller's config.
RunConfig eval_config(const wsptm_model* model, const wsptm_config* cfg) {
  RunConfig merged = RunConfig::from_kv(model->ckpt.config_kv);
  if (cfg != nullptr) {
    merged.eval_perplexity = cfg->cfg.eval_perplexity;
    merged.fold_in_iters = cfg->cfg.fold_in_iters;
    merged.model.threads = cfg->cfg.model.threads;
    merged.graph.threads = cfg->cfg.graph.threads;
  }
  return merged;
}

}  // namespace

extern "C" {

const char* wsptm_version(void) { return "0.1.0"; }

const char* wsptm_last_error(void) { return g_last_error.c_str(); }

void wsptm_string_free(char* s) { delete[] s; }

wsptm_config* wsptm_config_new(void) { return new wsptm_config{}; }

void wsptm_config_free(wsptm_config* cfg) { delete cfg; }

int wsptm_config_set(wsptm_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] { cfg->cfg.set(key, value); });
}

int wsptm_config_load_file(wsptm_config* cfg, const char* path) {
  if (!cfg || !path) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] { cfg->cfg.load_file(path); });
}

int wsptm_config_dump(const wsptm_config* cfg, char** out) {
  if (!cfg || !out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] { *out = copy_string(cfg->cfg.dump()); });
}

int wsptm_corpus_load(const wsptm_config* cfg, wsptm_corpus** out) {
  if (!cfg || !out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    if (cfg->cfg.corpus_path.empty()) throw InputError("config key `corpus` is not set");
    auto corpus = std::make_unique<wsptm_corpus>();
    corpus->corpus = load_corpus(cfg->cfg.corpus_path, cfg->cfg.load);
    *out = corpus.release();
  });
}

void wsptm_corpus_free(wsptm_corpus* corpus) { delete corpus; }

int wsptm_corpus_num_docs(const wsptm_corpus* corpus) {
  return corpus ? corpus->corpus.num_docs() : 0;
}

int wsptm_corpus_vocab_size(const wsptm_corpus* corpus) {
  return corpus ? corpus->corpus.vocab_size() : 0;
}

int wsptm_corpus_num_labels(const wsptm_corpus* corpus) {
  return corpus ? corpus->corpus.num_labels : 0;
}

int wsptm_seeds_load(const wsptm_config* cfg, const wsptm_corpus* corpus, wsptm_seeds** out) {
  if (!cfg || !corpus || !out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    if (cfg->cfg.seeds_path.empty()) throw InputError("config key `seeds` is not set");
    auto seeds = std::make_unique<wsptm_seeds>();
    seeds->seeds = load_seed_words(cfg->cfg.seeds_path, corpus->corpus, cfg->cfg.purify_seeds,
                                   cfg->cfg.model.rng_seed);
    *out = seeds.release();
  });
}

void wsptm_seeds_free(wsptm_seeds* seeds) { delete seeds; }

int wsptm_seeds_num_labels(const wsptm_seeds* seeds) {
  return seeds ? seeds->seeds.num_labels() : 0;
}

int wsptm_train(const wsptm_config* cfg, const wsptm_corpus* corpus, const wsptm_seeds* seeds,
                wsptm_model** out) {
  if (!cfg || !corpus || !seeds || !out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    Pipeline pipeline = prepare_loaded(cfg->cfg, corpus->corpus, seeds->seeds, true);
    FitResult result = train(pipeline);

    auto model = std::make_unique<wsptm_model>();
    model->ckpt.config_kv = pipeline.config.to_kv();
    model->ckpt.vocab_hash = vocabulary_hash(corpus->corpus.vocabulary);
    model->ckpt.state = std::move(result.state);
    model->ckpt.trace = std::move(result.trace);
    *out = model.release();
  });
}

void wsptm_model_free(wsptm_model* model) { delete model; }

int wsptm_model_save(const wsptm_model* model, const char* path) {
  if (!model || !path) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] { save_checkpoint(path, model->ckpt); });
}

int wsptm_model_load(const char* path, wsptm_model** out) {
  if (!path || !out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    auto model = std::make_unique<wsptm_model>();
    model->ckpt = load_checkpoint(path);
    *out = model.release();
  });
}

int wsptm_model_trace_csv(const wsptm_model* model, char** out) {
  if (!model || !out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] { *out = copy_string(trace_csv(model->ckpt.trace)); });
}

int wsptm_model_iterations(const wsptm_model* model) {
  if (!model || model->ckpt.trace.empty()) return 0;
  return model->ckpt.trace.back().iter;
}

int wsptm_model_doc_label(const wsptm_model* model, int doc, int* out) {
  if (!model || !out) return fail(WSPTM_ERR_INPUT, "null argument");
  *out = -1;
  return guarded([&] {
    const Matrix& theta = model->ckpt.state.theta;
    if (doc < 0 || doc >= static_cast<int>(theta.rows()))
      throw InputError("document id out of range");
    const auto row = theta.row(doc);
    int best = 0;
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k] > row[best]) best = static_cast<int>(k);
    *out = best;
  });
}

int wsptm_model_config(const wsptm_model* model, wsptm_config** out) {
  if (!model || !out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    auto cfg = std::make_unique<wsptm_config>();
    cfg->cfg = RunConfig::from_kv(model->ckpt.config_kv);
    *out = cfg.release();
  });
}

int wsptm_eval(const wsptm_model* model, const wsptm_config* cfg, const wsptm_corpus* corpus,
               const wsptm_seeds* seeds, char** json_out) {
  if (!model || !corpus || !seeds || !json_out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    if (vocabulary_hash(corpus->corpus.vocabulary) != model->ckpt.vocab_hash)
      throw CheckpointError("checkpoint vocabulary hash does not match this corpus");
    if (seeds->seeds.num_labels() != model->ckpt.state.num_labels())
      throw CheckpointError("checkpoint label count does not match the seed set");
    if (corpus->corpus.num_docs() != model->ckpt.state.num_docs())
      throw CheckpointError("checkpoint document count does not match this corpus");
    Pipeline pipeline =
        prepare_loaded(eval_config(model, cfg), corpus->corpus, seeds->seeds, false);
    const EvalOutcome outcome = evaluate_state(pipeline, model->ckpt.state);
    *json_out = copy_string(report_json(pipeline, outcome));
  });
}

int wsptm_stats(const wsptm_config* cfg, const wsptm_corpus* corpus, const wsptm_seeds* seeds,
                char** json_out) {
  if (!cfg || !corpus || !seeds || !json_out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    Pipeline pipeline = prepare_loaded(cfg->cfg, corpus->corpus, seeds->seeds, false);
    *json_out = copy_string(stats_json(pipeline));
  });
}

int wsptm_ablate(const wsptm_config* cfg, const wsptm_corpus* corpus, const wsptm_seeds* seeds,
                 const char* axis, const char* grid, char** csv_out) {
  if (!cfg || !corpus || !seeds || !axis || !csv_out)
    return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    Pipeline pipeline = prepare_loaded(cfg->cfg, corpus->corpus, seeds->seeds, false);
    const auto rows = ablate(pipeline, axis, parse_grid(grid ? grid : ""));
    *csv_out = copy_string(sweep_csv(rows));
  });
}

int wsptm_dump_priors(const wsptm_config* cfg, const wsptm_corpus* corpus,
                      const wsptm_seeds* seeds, char** jsonl_out) {
  if (!cfg || !corpus || !seeds || !jsonl_out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    Pipeline pipeline = prepare_loaded(cfg->cfg, corpus->corpus, seeds->seeds, false);
    *jsonl_out = copy_string(priors_jsonl(pipeline));
  });
}

int wsptm_dump_graph(const wsptm_config* cfg, const wsptm_corpus* corpus, char** tsv_out) {
  if (!cfg || !corpus || !tsv_out) return fail(WSPTM_ERR_INPUT, "null argument");
  return guarded([&] {
    const DocumentGraph graph = build_document_graph(corpus->corpus, cfg->cfg.graph);
    std::string out;
    for (int i = 0; i < graph.num_docs(); ++i)
      for (int j : graph.neighbors[i])
        if (j > i) out += std::to_string(i) + "\t" + std::to_string(j) + "\n";
    *tsv_out = copy_string(out);
  });
}

}  // extern "C"
