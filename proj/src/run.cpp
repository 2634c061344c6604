#include "wsptm/run.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "wsptm/errors.hpp"
#include "wsptm/parallel.hpp"

namespace wsptm {

using nlohmann::json;

Pipeline prepare(const RunConfig& raw_config, bool with_graph) {
  RunConfig config = raw_config.effective();
  config.validate();
  Corpus corpus = load_corpus(config.corpus_path, config.load);
  SeedWordSet seeds =
      load_seed_words(config.seeds_path, corpus, config.purify_seeds, config.model.rng_seed);
  return prepare_loaded(config, std::move(corpus), std::move(seeds), with_graph);
}

Pipeline prepare_loaded(const RunConfig& raw_config, Corpus corpus, SeedWordSet seeds,
                        bool with_graph) {
  RunConfig config = raw_config.effective();
  config.validate();
  config.prior.validate(seeds.num_labels());

  Pipeline p;
  p.config = config;
  p.corpus = std::move(corpus);
  p.seeds = std::move(seeds);
  p.counts = count_seed_occurrences(p.corpus, p.seeds);
  if (config.prior.pseudo_neighbors > 0)
    p.prototypes = compute_prototypes(p.corpus, p.seeds, config.prior.proto_base);
  p.gamma = compute_relevance(p.corpus, p.seeds, config.prior.epsilon);
  if (config.baseline_mode())
    p.pi.assign(p.corpus.vocab_size(), 1.0);
  else
    p.pi = compute_term_weights(p.counts.tf, static_cast<double>(p.corpus.total_tokens));
  p.prior = build_supervised_prior(p.corpus, p.seeds, p.counts, p.prototypes, config.prior);
  if (with_graph) p.graph = build_document_graph(p.corpus, config.graph);
  return p;
}

FitResult train(const Pipeline& pipeline) {
  return fit(pipeline.corpus, pipeline.prior, pipeline.graph, pipeline.gamma, pipeline.pi,
             pipeline.config.model);
}

namespace {

EvalOutcome evaluate_with(const Corpus& corpus, int num_labels, const Matrix& alpha_prime,
                          const RunConfig& config, const ModelState& state) {
  std::vector<int> doc_ids;
  std::vector<int> gold;
  for (const auto& doc : corpus.documents) {
    if (!doc.is_test || doc.gold_label < 0) continue;
    doc_ids.push_back(doc.id);
    gold.push_back(doc.gold_label);
  }
  if (doc_ids.empty()) throw InputError("no labeled test documents to evaluate");

  EvalOutcome outcome;
  outcome.test_docs = static_cast<int>(doc_ids.size());
  outcome.f1 = f1_scores(classify(state.theta, doc_ids), gold, num_labels);
  if (config.eval_perplexity)
    outcome.perplexity =
        perplexity(state, corpus, alpha_prime, config.model, config.fold_in_iters);
  return outcome;
}

}  // namespace

EvalOutcome evaluate_state(const Pipeline& pipeline, const ModelState& state) {
  return evaluate_with(pipeline.corpus, pipeline.num_labels(), pipeline.prior.alpha_prime,
                       pipeline.config, state);
}

std::string report_json(const Pipeline& pipeline, const EvalOutcome& outcome) {
  json report;
  report["micro_f1"] = outcome.f1.micro;
  report["macro_f1"] = outcome.f1.macro;
  report["per_class_f1"] = outcome.f1.per_class;
  if (outcome.perplexity)
    report["perplexity"] = *outcome.perplexity;
  else
    report["perplexity"] = nullptr;
  std::vector<std::vector<long long>> confusion(pipeline.num_labels());
  for (int g = 0; g < pipeline.num_labels(); ++g)
    for (int c = 0; c < pipeline.num_labels(); ++c)
      confusion[g].push_back(static_cast<long long>(outcome.f1.confusion(g, c)));
  report["confusion"] = confusion;
  report["test_docs"] = outcome.test_docs;
  report["config"] = pipeline.config.to_kv();
  return report.dump(2) + "\n";
}

std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<std::string> default_grid(const std::string& axis) {
  std::vector<std::string> grid;
  if (axis == "rho" || axis == "tau") {
    for (int i = 0; i <= 16; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%.2f", 0.1 + 0.05 * i);
      grid.push_back(buf);
    }
  } else if (axis == "P") {
    for (int p = 0; p <= 5; ++p) grid.push_back(std::to_string(p));
  } else if (axis == "components") {
    grid = {"full", "-PNNC", "-LF"};
  } else {
    throw InputError("unknown sweep axis `" + axis + "` (rho, tau, P, components)");
  }
  return grid;
}

namespace {

RunConfig config_for_point(const RunConfig& base, const std::string& axis,
                           const std::string& value) {
  RunConfig cfg = base;
  if (axis == "rho") {
    cfg.prior.rho = std::stod(value);
  } else if (axis == "tau") {
    cfg.prior.tau = std::stod(value);
  } else if (axis == "P") {
    cfg.prior.pseudo_neighbors = std::stoi(value);
    if (cfg.prior.pseudo_neighbors == 0) cfg.prior.tau = 0.0;  // scheme off
  } else if (axis == "components") {
    if (value == "full") {
    } else if (value == "-PNNC") {
      cfg.prior.tau = 0.0;
    } else if (value == "-LF") {
      cfg.prior.rho = 0.0;
    } else {
      throw InputError("components grid accepts full, -PNNC, -LF; got `" + value + "`");
    }
  } else {
    throw InputError("unknown sweep axis `" + axis + "` (rho, tau, P, components)");
  }
  return cfg;
}

}  // namespace

std::vector<SweepRow> ablate(const RunConfig& base, const std::string& axis,
                             const std::vector<std::string>& grid) {
  Pipeline pipeline = prepare(base, true);
  return ablate(pipeline, axis, grid);
}

std::vector<SweepRow> ablate(Pipeline& pipeline, const std::string& axis,
                             const std::vector<std::string>& grid_in) {
  const std::vector<std::string> grid = grid_in.empty() ? default_grid(axis) : grid_in;
  if (grid.empty()) throw InputError("empty sweep grid");

  const RunConfig& shared = pipeline.config;
  // Validate the whole grid before any work runs.
  std::vector<RunConfig> points;
  points.reserve(grid.size());
  for (const auto& value : grid) {
    RunConfig cfg = config_for_point(shared, axis, value);
    try {
      cfg.validate();
      cfg.prior.validate(pipeline.num_labels());
    } catch (const InputError& e) {
      throw InputError("sweep point " + axis + "=" + value + ": " + e.what());
    }
    points.push_back(std::move(cfg));
  }

  if (pipeline.graph.neighbors.empty())
    pipeline.graph = build_document_graph(pipeline.corpus, shared.graph);

  // Prototypes are sweep-invariant but may be missing when the shared config
  // has P = 0 while some point needs them.
  bool needs_prototypes = false;
  for (const auto& cfg : points) needs_prototypes |= cfg.prior.pseudo_neighbors > 0;
  if (needs_prototypes && pipeline.prototypes.empty())
    pipeline.prototypes =
        compute_prototypes(pipeline.corpus, pipeline.seeds, shared.prior.proto_base);

  std::vector<SweepRow> rows(points.size());
  parallel_chunks(points.size(), static_cast<int>(points.size()), shared.model.threads,
                  [&](int, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                      RunConfig cfg = points[i];
                      cfg.model.threads = 1;  // points already run in parallel
                      cfg.model.rng_seed = derive_stream_seed(shared.model.rng_seed, i);

                      const SupervisedPrior prior = build_supervised_prior(
                          pipeline.corpus, pipeline.seeds, pipeline.counts, pipeline.prototypes,
                          cfg.prior);
                      const FitResult result = fit(pipeline.corpus, prior, pipeline.graph,
                                                   pipeline.gamma, pipeline.pi, cfg.model);
                      const EvalOutcome outcome =
                          evaluate_with(pipeline.corpus, pipeline.num_labels(),
                                        prior.alpha_prime, cfg, result.state);
                      rows[i] = {axis, grid[i], outcome.f1.micro, outcome.f1.macro,
                                 outcome.perplexity};
                    }
                  });
  return rows;
}

std::vector<std::string> parse_grid(const std::string& spec) {
  std::vector<std::string> grid;
  if (spec.empty()) return grid;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    int lo, hi;
    try {
      lo = std::stoi(spec.substr(0, dots));
      hi = std::stoi(spec.substr(dots + 2));
    } catch (const std::exception&) {
      throw InputError("bad grid range `" + spec + "` (expected a..b)");
    }
    if (hi < lo) throw InputError("empty grid range `" + spec + "`");
    for (int v = lo; v <= hi; ++v) grid.push_back(std::to_string(v));
    return grid;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) grid.push_back(item);
  if (grid.empty()) throw InputError("empty sweep grid `" + spec + "`");
  return grid;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "param,value,micro_f1,macro_f1,perplexity\n";
  char buf[64];
  for (const auto& row : rows) {
    out << row.param << "," << row.value << ",";
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", row.micro_f1, row.macro_f1);
    out << buf << ",";
    if (row.perplexity) {
      std::snprintf(buf, sizeof(buf), "%.4f", *row.perplexity);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

namespace {

json coverage_json(const Pipeline& pipeline, int p) {
  std::vector<std::vector<int>> omega(pipeline.corpus.num_docs());
  if (p > 0) omega = find_pseudo_neighbors(pipeline.corpus, pipeline.prototypes, p);

  std::vector<int> gold(pipeline.corpus.num_docs(), -1);
  for (const auto& doc : pipeline.corpus.documents) gold[doc.id] = doc.gold_label;
  const CoverageStats stats = coverage_stats(pipeline.counts.df, omega, gold);

  json out;
  out["P"] = p;
  out["non_marked"] = stats.non_marked;
  out["true_marked"] = stats.true_marked;
  if (stats.total_docs > 0)
    out["non_marked_pct"] = 100.0 * stats.non_marked / stats.total_docs;
  if (stats.total_docs > 0)
    out["true_marked_pct"] = 100.0 * stats.true_marked / stats.total_docs;
  return out;
}

}  // namespace

std::string stats_json(const Pipeline& pipeline) {
  json out;
  out["total_docs"] = pipeline.corpus.num_docs();
  int labeled = 0;
  for (const auto& doc : pipeline.corpus.documents) labeled += doc.gold_label >= 0;
  out["labeled_docs"] = labeled;
  out["no_prototype"] = coverage_json(pipeline, 0);
  out["configured"] = coverage_json(pipeline, pipeline.config.prior.pseudo_neighbors);
  return out.dump(2) + "\n";
}

std::string priors_jsonl(const Pipeline& pipeline) {
  std::ostringstream out;
  json meta;
  meta["meta"] = true;
  meta["num_docs"] = pipeline.corpus.num_docs();
  meta["num_labels"] = pipeline.num_labels();
  meta["label_frequency"] = pipeline.prior.label_freq;
  out << meta.dump() << "\n";

  for (int d = 0; d < pipeline.corpus.num_docs(); ++d) {
    json row;
    row["doc"] = d;
    row["alpha_prime"] = std::vector<double>(pipeline.prior.alpha_prime.row(d).begin(),
                                             pipeline.prior.alpha_prime.row(d).end());
    row["membership"] = std::vector<double>(pipeline.prior.membership.row(d).begin(),
                                            pipeline.prior.membership.row(d).end());
    row["omega"] = pipeline.prior.omega[d];
    out << row.dump() << "\n";
  }
  return out.str();
}

}  // namespace wsptm
