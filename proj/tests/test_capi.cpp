#include "wsptm.h"

#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "synthetic.hpp"

namespace {

struct Fixture {
  std::string corpus_path;
  std::string seeds_path;

  Fixture() {
    testsupport::SyntheticSpec spec;
    spec.docs = 120;
    spec.rng_seed = 17;
    const auto data = testsupport::make_synthetic(spec);
    corpus_path = testsupport::write_temp_file("capi_corpus", data.corpus_text);
    seeds_path = testsupport::write_temp_file("capi_seeds", data.seeds_text);
  }
  ~Fixture() {
    std::filesystem::remove(corpus_path);
    std::filesystem::remove(seeds_path);
  }

  wsptm_config* config() const {
    wsptm_config* cfg = wsptm_config_new();
    REQUIRE(wsptm_config_set(cfg, "corpus", corpus_path.c_str()) == WSPTM_OK);
    REQUIRE(wsptm_config_set(cfg, "seeds", seeds_path.c_str()) == WSPTM_OK);
    REQUIRE(wsptm_config_set(cfg, "min_doc_freq", "1") == WSPTM_OK);
    REQUIRE(wsptm_config_set(cfg, "min_word_len", "1") == WSPTM_OK);
    REQUIRE(wsptm_config_set(cfg, "max_iter", "10") == WSPTM_OK);
    REQUIRE(wsptm_config_set(cfg, "threads", "1") == WSPTM_OK);
    return cfg;
  }
};

}  // namespace

TEST_CASE("config keys are validated through the C surface") {
  wsptm_config* cfg = wsptm_config_new();
  CHECK(wsptm_config_set(cfg, "eta", "12.5") == WSPTM_OK);
  CHECK(wsptm_config_set(cfg, "bogus_key", "1") == WSPTM_ERR_INPUT);
  CHECK(std::string(wsptm_last_error()).find("bogus_key") != std::string::npos);
  CHECK(wsptm_config_set(cfg, "rho", "not-a-number") == WSPTM_ERR_INPUT);

  char* dump = nullptr;
  REQUIRE(wsptm_config_dump(cfg, &dump) == WSPTM_OK);
  CHECK(std::string(dump).find("eta=12.5\n") != std::string::npos);
  wsptm_string_free(dump);
  wsptm_config_free(cfg);
}

TEST_CASE("config files round-trip through dump and load") {
  wsptm_config* cfg = wsptm_config_new();
  REQUIRE(wsptm_config_set(cfg, "rho", "0.35") == WSPTM_OK);
  REQUIRE(wsptm_config_set(cfg, "mode", "lapswtm-baseline") == WSPTM_OK);
  char* dump = nullptr;
  REQUIRE(wsptm_config_dump(cfg, &dump) == WSPTM_OK);
  const std::string path = testsupport::write_temp_file("cfg", dump);
  wsptm_string_free(dump);

  wsptm_config* reloaded = wsptm_config_new();
  REQUIRE(wsptm_config_load_file(reloaded, path.c_str()) == WSPTM_OK);
  char* dump2 = nullptr;
  REQUIRE(wsptm_config_dump(reloaded, &dump2) == WSPTM_OK);
  char* dump3 = nullptr;
  REQUIRE(wsptm_config_dump(cfg, &dump3) == WSPTM_OK);
  CHECK(std::string(dump2) == std::string(dump3));
  wsptm_string_free(dump2);
  wsptm_string_free(dump3);
  wsptm_config_free(reloaded);
  wsptm_config_free(cfg);
  std::filesystem::remove(path);
}

TEST_CASE("missing input files map to the input status code") {
  wsptm_config* cfg = wsptm_config_new();
  wsptm_corpus* corpus = nullptr;
  CHECK(wsptm_corpus_load(cfg, &corpus) == WSPTM_ERR_INPUT);  // key unset
  REQUIRE(wsptm_config_set(cfg, "corpus", "/nonexistent/file.tsv") == WSPTM_OK);
  CHECK(wsptm_corpus_load(cfg, &corpus) == WSPTM_ERR_INPUT);
  CHECK(std::strlen(wsptm_last_error()) > 0);
  wsptm_config_free(cfg);
}

TEST_CASE("end-to-end train, save, load, eval through the C API") {
  const Fixture fx;
  wsptm_config* cfg = fx.config();

  wsptm_corpus* corpus = nullptr;
  REQUIRE(wsptm_corpus_load(cfg, &corpus) == WSPTM_OK);
  CHECK(wsptm_corpus_num_docs(corpus) == 120);
  CHECK(wsptm_corpus_vocab_size(corpus) > 0);
  CHECK(wsptm_corpus_num_labels(corpus) == 4);

  wsptm_seeds* seeds = nullptr;
  REQUIRE(wsptm_seeds_load(cfg, corpus, &seeds) == WSPTM_OK);
  CHECK(wsptm_seeds_num_labels(seeds) == 4);

  wsptm_model* model = nullptr;
  REQUIRE(wsptm_train(cfg, corpus, seeds, &model) == WSPTM_OK);
  CHECK(wsptm_model_iterations(model) >= 1);

  char* trace = nullptr;
  REQUIRE(wsptm_model_trace_csv(model, &trace) == WSPTM_OK);
  CHECK(std::string(trace).rfind("iter,objective,penalty\n", 0) == 0);
  wsptm_string_free(trace);

  int label = -1;
  REQUIRE(wsptm_model_doc_label(model, 0, &label) == WSPTM_OK);
  CHECK(label >= 0);
  CHECK(label < 4);
  int oob = -1;
  CHECK(wsptm_model_doc_label(model, 10000, &oob) == WSPTM_ERR_INPUT);

  const std::string ckpt_path =
      (std::filesystem::temp_directory_path() / "wsptm_capi_ckpt.json").string();
  REQUIRE(wsptm_model_save(model, ckpt_path.c_str()) == WSPTM_OK);

  wsptm_model* reloaded = nullptr;
  REQUIRE(wsptm_model_load(ckpt_path.c_str(), &reloaded) == WSPTM_OK);
  int relabel = -1;
  REQUIRE(wsptm_model_doc_label(reloaded, 0, &relabel) == WSPTM_OK);
  CHECK(relabel == label);

  char* report = nullptr;
  REQUIRE(wsptm_eval(reloaded, cfg, corpus, seeds, &report) == WSPTM_OK);
  const std::string json(report);
  CHECK(json.find("\"micro_f1\"") != std::string::npos);
  CHECK(json.find("\"macro_f1\"") != std::string::npos);
  CHECK(json.find("\"perplexity\"") != std::string::npos);
  CHECK(json.find("\"config\"") != std::string::npos);
  CHECK(json.find("\"rng_seed\"") != std::string::npos);
  wsptm_string_free(report);

  // A corpus with a different vocabulary is rejected as a checkpoint error.
  wsptm_config* other_cfg = fx.config();
  REQUIRE(wsptm_config_set(other_cfg, "min_word_len", "4") == WSPTM_OK);
  wsptm_corpus* other = nullptr;
  REQUIRE(wsptm_corpus_load(other_cfg, &other) == WSPTM_OK);
  char* bad_report = nullptr;
  CHECK(wsptm_eval(reloaded, cfg, other, seeds, &bad_report) == WSPTM_ERR_CHECKPOINT);
  wsptm_corpus_free(other);
  wsptm_config_free(other_cfg);

  wsptm_model_free(reloaded);
  wsptm_model_free(model);
  wsptm_seeds_free(seeds);
  wsptm_corpus_free(corpus);
  wsptm_config_free(cfg);
  std::filesystem::remove(ckpt_path);
}

TEST_CASE("malformed checkpoints map to the checkpoint status code") {
  const std::string path = testsupport::write_temp_file("ckpt", "{\"not\": \"a checkpoint\"}");
  wsptm_model* model = nullptr;
  CHECK(wsptm_model_load(path.c_str(), &model) == WSPTM_ERR_CHECKPOINT);
  CHECK(wsptm_model_load("/nonexistent/ckpt.json", &model) == WSPTM_ERR_CHECKPOINT);
  const std::string junk = testsupport::write_temp_file("ckpt", "not json at all");
  CHECK(wsptm_model_load(junk.c_str(), &model) == WSPTM_ERR_CHECKPOINT);
  std::filesystem::remove(path);
  std::filesystem::remove(junk);
}

TEST_CASE("stats, ablate and prior dumps through the C API") {
  const Fixture fx;
  wsptm_config* cfg = fx.config();
  REQUIRE(wsptm_config_set(cfg, "eval_perplexity", "false") == WSPTM_OK);
  REQUIRE(wsptm_config_set(cfg, "max_iter", "5") == WSPTM_OK);

  wsptm_corpus* corpus = nullptr;
  REQUIRE(wsptm_corpus_load(cfg, &corpus) == WSPTM_OK);
  wsptm_seeds* seeds = nullptr;
  REQUIRE(wsptm_seeds_load(cfg, corpus, &seeds) == WSPTM_OK);

  char* stats = nullptr;
  REQUIRE(wsptm_stats(cfg, corpus, seeds, &stats) == WSPTM_OK);
  const std::string stats_str(stats);
  CHECK(stats_str.find("\"no_prototype\"") != std::string::npos);
  CHECK(stats_str.find("\"true_marked\"") != std::string::npos);
  wsptm_string_free(stats);

  char* csv = nullptr;
  REQUIRE(wsptm_ablate(cfg, corpus, seeds, "P", "0..2", &csv) == WSPTM_OK);
  const std::string csv_str(csv);
  CHECK(csv_str.rfind("param,value,micro_f1,macro_f1,perplexity\n", 0) == 0);
  CHECK(std::count(csv_str.begin(), csv_str.end(), '\n') == 4);  // header + 3 rows
  wsptm_string_free(csv);
  CHECK(wsptm_ablate(cfg, corpus, seeds, "tau", "2.0", &csv) == WSPTM_ERR_INPUT);

  char* jsonl = nullptr;
  REQUIRE(wsptm_dump_priors(cfg, corpus, seeds, &jsonl) == WSPTM_OK);
  const std::string jsonl_str(jsonl);
  CHECK(jsonl_str.find("\"label_frequency\"") != std::string::npos);
  CHECK(jsonl_str.find("\"alpha_prime\"") != std::string::npos);
  CHECK(std::count(jsonl_str.begin(), jsonl_str.end(), '\n') == 121);  // meta + 120 docs
  wsptm_string_free(jsonl);

  char* edges = nullptr;
  REQUIRE(wsptm_dump_graph(cfg, corpus, &edges) == WSPTM_OK);
  const std::string edges_str(edges);
  CHECK(edges_str.find('\t') != std::string::npos);
  // symmetrized top-5 graph on 120 docs has at least 5*120/2 edges
  CHECK(std::count(edges_str.begin(), edges_str.end(), '\n') >= 300);
  wsptm_string_free(edges);

  wsptm_seeds_free(seeds);
  wsptm_corpus_free(corpus);
  wsptm_config_free(cfg);
}

TEST_CASE("version and error strings are always available") {
  CHECK(wsptm_version() != nullptr);
  CHECK(wsptm_last_error() != nullptr);
  wsptm_string_free(nullptr);  // must be a no-op
}
