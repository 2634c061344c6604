// Acceptance checks that need the public benchmark corpora. The datasets are
// not distributable with the repository; point WSPTM_REUTERS_TSV (and
// optionally WSPTM_NEWSGROUP_TSV / WSPTM_NEWSGROUP_SEEDS) at corpus files in
// the `label TAB split TAB text` format and re-run. Without them the binary
// reports a skip (exit code 77, picked up by ctest).
//
// Coverage statistics gate the run; the full F1/perplexity reproduction is
// informational: values are printed for comparison but never fail the build,
// because they also depend on hyperparameters the source material leaves
// open.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "wsptm/checkpoint.hpp"
#include "wsptm/eval.hpp"
#include "wsptm/run.hpp"

using namespace wsptm;

namespace {

constexpr int kSkipExit = 77;

struct Expected {
  double non_marked_p0, true_marked_p0, non_marked_p1, true_marked_p1;  // percent
  double micro, macro;  // full-run reference means
};

int g_failures = 0;

void gate(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

double pct(int part, int total) { return 100.0 * part / total; }

RunConfig dataset_config(const std::string& corpus, const std::string& seeds) {
  RunConfig cfg;
  cfg.corpus_path = corpus;
  cfg.seeds_path = seeds;
  cfg.stopwords_path = std::string(WSPTM_DATA_DIR) + "/stopwords_en.txt";
  cfg.load.min_doc_freq = 5;
  cfg.load.min_word_len = 2;
  return cfg;
}

void coverage_check(const std::string& name, const RunConfig& cfg, const Expected& expected) {
  const auto t0 = std::chrono::steady_clock::now();
  Pipeline pipeline = prepare(cfg, false);
  const int docs = pipeline.corpus.num_docs();
  std::vector<int> gold(docs, -1);
  for (const auto& doc : pipeline.corpus.documents) gold[doc.id] = doc.gold_label;

  const std::vector<std::vector<int>> empty_omega(docs);
  const CoverageStats p0 = coverage_stats(pipeline.counts.df, empty_omega, gold);
  const auto omega = find_pseudo_neighbors(pipeline.corpus, pipeline.prototypes, 1);
  const CoverageStats p1 = coverage_stats(pipeline.counts.df, omega, gold);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::printf("%s: D=%d V=%d\n", name.c_str(), docs, pipeline.corpus.vocab_size());
  char line[256];
  auto check_pct = [&](const char* tag, double got, double want) {
    std::snprintf(line, sizeof(line), "%s %s: %.1f%% (reference %.0f%%, tolerance 3pp)",
                  name.c_str(), tag, got, want);
    gate(std::abs(got - want) <= 3.0, line);
  };
  check_pct("no-seed docs (P=0)", pct(p0.non_marked, docs), expected.non_marked_p0);
  check_pct("gold marked (P=0)", pct(p0.true_marked, docs), expected.true_marked_p0);
  check_pct("no-seed docs (P=1)", pct(p1.non_marked, docs), expected.non_marked_p1);
  check_pct("gold marked (P=1)", pct(p1.true_marked, docs), expected.true_marked_p1);
  std::snprintf(line, sizeof(line), "%s coverage computed in %.1f s (budget 120 s)",
                name.c_str(), seconds);
  gate(seconds < 120.0, line);
}

void full_run_report(const std::string& name, const RunConfig& base, const Expected& expected) {
  std::printf("-- %s full reproduction (informational, 10 seeds) --\n", name.c_str());
  double micro_sum = 0.0, macro_sum = 0.0;
  for (int run = 0; run < 10; ++run) {
    RunConfig cfg = base;
    cfg.model.rng_seed = derive_stream_seed(base.model.rng_seed, run);
    cfg.eval_perplexity = run == 0;  // fold-in once; it does not vary with init
    Pipeline pipeline = prepare(cfg, true);
    const FitResult result = train(pipeline);
    const EvalOutcome outcome = evaluate_state(pipeline, result.state);
    micro_sum += outcome.f1.micro;
    macro_sum += outcome.f1.macro;
    std::printf("  seed %d: micro %.4f macro %.4f%s\n", run, outcome.f1.micro, outcome.f1.macro,
                result.converged ? "" : " (hit max_iter)");
    if (run == 0 && outcome.perplexity) {
      RunConfig baseline = cfg;
      baseline.mode = "lapswtm-baseline";
      Pipeline bp = prepare(baseline, true);
      const FitResult bres = train(bp);
      const EvalOutcome bout = evaluate_state(bp, bres.state);
      std::printf("  perplexity: %.1f vs %.1f baseline -> %s\n", *outcome.perplexity,
                  bout.perplexity ? *bout.perplexity : 0.0,
                  bout.perplexity && *outcome.perplexity < *bout.perplexity
                      ? "better (expected direction)"
                      : "NOT better");
    }
  }
  std::printf("[REPORT] %s mean micro %.4f (reference %.3f +/- 0.03), mean macro %.4f "
              "(reference %.3f +/- 0.04)\n",
              name.c_str(), micro_sum / 10, expected.micro, macro_sum / 10, expected.macro);
}

}  // namespace

int main() try {
  const char* reuters = std::getenv("WSPTM_REUTERS_TSV");
  if (!reuters || !*reuters) {
    std::printf("SKIP: set WSPTM_REUTERS_TSV to a Reuters corpus file "
                "(label TAB split TAB text, 0-based labels) to run the dataset checks.\n");
    return kSkipExit;
  }

  const Expected reuters_expected{62.0, 26.0, 0.0, 69.0, 0.938, 0.830};
  RunConfig reuters_cfg =
      dataset_config(reuters, std::string(WSPTM_DATA_DIR) + "/reuters_seeds_sl.tsv");
  coverage_check("reuters", reuters_cfg, reuters_expected);

  const char* newsgroup = std::getenv("WSPTM_NEWSGROUP_TSV");
  const char* newsgroup_seeds = std::getenv("WSPTM_NEWSGROUP_SEEDS");
  if (newsgroup && *newsgroup && newsgroup_seeds && *newsgroup_seeds) {
    const Expected ng_expected{52.0, 30.0, 0.0, 67.0, 0.805, 0.759};
    coverage_check("newsgroup", dataset_config(newsgroup, newsgroup_seeds), ng_expected);
  } else {
    std::printf("newsgroup corpus not provided; skipping its coverage check\n");
  }

  if (const char* full = std::getenv("WSPTM_FULL_EVAL"); full && *full && *full != '0') {
    full_run_report("reuters", reuters_cfg, reuters_expected);
    if (newsgroup && *newsgroup && newsgroup_seeds && *newsgroup_seeds)
      full_run_report("newsgroup", dataset_config(newsgroup, newsgroup_seeds),
                      {52.0, 30.0, 0.0, 67.0, 0.805, 0.759});
  } else {
    std::printf("WSPTM_FULL_EVAL not set; skipping the informational full reproduction\n");
  }

  std::printf("%s\n", g_failures == 0 ? "dataset checks passed" : "dataset checks FAILED");
  return g_failures == 0 ? 0 : 1;
} catch (const std::exception& e) {
  std::printf("[FAIL] dataset checks aborted: %s\n", e.what());
  return 1;
}
