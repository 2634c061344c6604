// wsptm command line: train / eval / ablate / stats / dump-priors.
// Talks to the library exclusively through the C API in wsptm.h.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wsptm.h"

namespace {

struct ConfigDeleter {
  void operator()(wsptm_config* p) const { wsptm_config_free(p); }
};
struct CorpusDeleter {
  void operator()(wsptm_corpus* p) const { wsptm_corpus_free(p); }
};
struct SeedsDeleter {
  void operator()(wsptm_seeds* p) const { wsptm_seeds_free(p); }
};
struct ModelDeleter {
  void operator()(wsptm_model* p) const { wsptm_model_free(p); }
};

using ConfigPtr = std::unique_ptr<wsptm_config, ConfigDeleter>;
using CorpusPtr = std::unique_ptr<wsptm_corpus, CorpusDeleter>;
using SeedsPtr = std::unique_ptr<wsptm_seeds, SeedsDeleter>;
using ModelPtr = std::unique_ptr<wsptm_model, ModelDeleter>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { wsptm_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

[[noreturn]] void die(int status) {
  std::cerr << "wsptm: " << wsptm_last_error() << "\n";
  std::exit(status);
}

void check(int status) {
  if (status != WSPTM_OK) die(status);
}

// Options shared by every subcommand. Precedence: config file, then named
// flags, then --set pairs.
struct CommonOpts {
  std::string config_file;
  std::string corpus, seeds, stopwords, out, mode;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "key=value config file");
    cmd->add_option("--corpus", corpus, "corpus file (label TAB split TAB text)");
    cmd->add_option("--seeds", seeds, "seed word file (label_id TAB word[,word...])");
    cmd->add_option("--stopwords", stopwords, "stopword list, one word per line");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--mode", mode, "wsptm or lapswtm-baseline");
    cmd->add_option("--set", sets, "override any config key, e.g. --set eta=10")
        ->take_all();
  }

  void apply(wsptm_config* cfg) const {
    if (!config_file.empty()) check(wsptm_config_load_file(cfg, config_file.c_str()));
    if (!corpus.empty()) check(wsptm_config_set(cfg, "corpus", corpus.c_str()));
    if (!seeds.empty()) check(wsptm_config_set(cfg, "seeds", seeds.c_str()));
    if (!stopwords.empty()) check(wsptm_config_set(cfg, "stopwords", stopwords.c_str()));
    if (!out.empty()) check(wsptm_config_set(cfg, "out", out.c_str()));
    if (!mode.empty()) check(wsptm_config_set(cfg, "mode", mode.c_str()));
    for (const auto& pair : sets) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) {
        std::cerr << "wsptm: --set expects key=value, got `" << pair << "`\n";
        std::exit(WSPTM_ERR_INPUT);
      }
      check(wsptm_config_set(cfg, pair.substr(0, eq).c_str(), pair.substr(eq + 1).c_str()));
    }
  }
};

std::string config_get(const wsptm_config* cfg, const std::string& key) {
  OwnedString dump;
  check(wsptm_config_dump(cfg, &dump.s));
  std::istringstream in(dump.str());
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

std::filesystem::path ensure_out_dir(const wsptm_config* cfg) {
  std::filesystem::path dir = config_get(cfg, "out");
  if (dir.empty()) dir = ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "wsptm: cannot create output directory " << dir << ": " << ec.message() << "\n";
    std::exit(WSPTM_ERR_INPUT);
  }
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    std::cerr << "wsptm: cannot write " << path << "\n";
    std::exit(WSPTM_ERR_INTERNAL);
  }
}

void write_config_snapshot(const wsptm_config* cfg, const std::filesystem::path& dir) {
  OwnedString dump;
  check(wsptm_config_dump(cfg, &dump.s));
  write_file(dir / "config.snapshot", dump.str());
}

std::pair<CorpusPtr, SeedsPtr> load_inputs(const wsptm_config* cfg) {
  wsptm_corpus* corpus = nullptr;
  check(wsptm_corpus_load(cfg, &corpus));
  CorpusPtr corpus_ptr(corpus);
  wsptm_seeds* seeds = nullptr;
  check(wsptm_seeds_load(cfg, corpus, &seeds));
  return {std::move(corpus_ptr), SeedsPtr(seeds)};
}

int cmd_train(const CommonOpts& opts, bool dump_graph) {
  ConfigPtr cfg(wsptm_config_new());
  opts.apply(cfg.get());

  auto [corpus, seeds] = load_inputs(cfg.get());
  std::cout << "corpus: " << wsptm_corpus_num_docs(corpus.get()) << " docs, "
            << wsptm_corpus_vocab_size(corpus.get()) << " words, "
            << wsptm_seeds_num_labels(seeds.get()) << " labels\n";

  wsptm_model* model_raw = nullptr;
  check(wsptm_train(cfg.get(), corpus.get(), seeds.get(), &model_raw));
  ModelPtr model(model_raw);

  const auto dir = ensure_out_dir(cfg.get());
  check(wsptm_model_save(model.get(), (dir / "checkpoint.json").string().c_str()));
  OwnedString trace;
  check(wsptm_model_trace_csv(model.get(), &trace.s));
  write_file(dir / "trace.csv", trace.str());
  write_config_snapshot(cfg.get(), dir);
  if (dump_graph) {
    OwnedString edges;
    check(wsptm_dump_graph(cfg.get(), corpus.get(), &edges.s));
    write_file(dir / "graph.tsv", edges.str());
  }

  std::cout << "trained " << wsptm_model_iterations(model.get()) << " iterations\n"
            << "wrote " << (dir / "checkpoint.json").string() << ", "
            << (dir / "trace.csv").string() << ", " << (dir / "config.snapshot").string() << "\n";
  return 0;
}

int cmd_eval(const CommonOpts& opts, const std::string& checkpoint) {
  wsptm_model* model_raw = nullptr;
  check(wsptm_model_load(checkpoint.c_str(), &model_raw));
  ModelPtr model(model_raw);

  // Start from the training-time config so preprocessing matches, then let
  // the caller override paths and evaluation knobs.
  wsptm_config* cfg_raw = nullptr;
  check(wsptm_model_config(model.get(), &cfg_raw));
  ConfigPtr cfg(cfg_raw);
  opts.apply(cfg.get());

  auto [corpus, seeds] = load_inputs(cfg.get());
  OwnedString report;
  check(wsptm_eval(model.get(), cfg.get(), corpus.get(), seeds.get(), &report.s));

  const auto dir = ensure_out_dir(cfg.get());
  write_file(dir / "report.json", report.str());
  write_config_snapshot(cfg.get(), dir);
  std::cout << report.str();
  return 0;
}

int cmd_ablate(const CommonOpts& opts, const std::string& axis, const std::string& grid) {
  ConfigPtr cfg(wsptm_config_new());
  opts.apply(cfg.get());

  auto [corpus, seeds] = load_inputs(cfg.get());
  OwnedString csv;
  check(wsptm_ablate(cfg.get(), corpus.get(), seeds.get(), axis.c_str(), grid.c_str(), &csv.s));

  const auto dir = ensure_out_dir(cfg.get());
  write_file(dir / "sweep.csv", csv.str());
  write_config_snapshot(cfg.get(), dir);
  std::cout << csv.str();
  return 0;
}

int cmd_stats(const CommonOpts& opts) {
  ConfigPtr cfg(wsptm_config_new());
  opts.apply(cfg.get());

  auto [corpus, seeds] = load_inputs(cfg.get());
  OwnedString json;
  check(wsptm_stats(cfg.get(), corpus.get(), seeds.get(), &json.s));
  std::cout << json.str();
  return 0;
}

int cmd_dump_priors(const CommonOpts& opts) {
  ConfigPtr cfg(wsptm_config_new());
  opts.apply(cfg.get());

  auto [corpus, seeds] = load_inputs(cfg.get());
  OwnedString jsonl;
  check(wsptm_dump_priors(cfg.get(), corpus.get(), seeds.get(), &jsonl.s));

  const auto dir = ensure_out_dir(cfg.get());
  write_file(dir / "priors.jsonl", jsonl.str());
  write_config_snapshot(cfg.get(), dir);
  std::cout << "wrote " << (dir / "priors.jsonl").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weakly supervised topic-model text classifier"};
  app.require_subcommand(1);

  CommonOpts train_opts, eval_opts, ablate_opts, stats_opts, dump_opts;
  std::string checkpoint, axis, grid;
  bool dump_graph = false;

  auto* train = app.add_subcommand("train", "fit a model and write a checkpoint");
  train_opts.attach(train);
  train->add_flag("--dump-graph", dump_graph, "also write the neighbor graph edge list");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
  eval_opts.attach(eval);
  eval->add_option("--checkpoint", checkpoint, "checkpoint written by train")->required();

  auto* ablate = app.add_subcommand("ablate", "sweep one parameter axis");
  ablate_opts.attach(ablate);
  ablate->add_option("--axis", axis, "rho, tau, P, or components")->required();
  ablate->add_option("--grid", grid, "a..b range or comma list (default: built-in sweep)");

  auto* stats = app.add_subcommand("stats", "marked-label coverage statistics");
  stats_opts.attach(stats);

  auto* dump = app.add_subcommand("dump-priors", "write per-document supervision diagnostics");
  dump_opts.attach(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : WSPTM_ERR_INPUT;
  }

  if (train->parsed()) return cmd_train(train_opts, dump_graph);
  if (eval->parsed()) return cmd_eval(eval_opts, checkpoint);
  if (ablate->parsed()) return cmd_ablate(ablate_opts, axis, grid);
  if (stats->parsed()) return cmd_stats(stats_opts);
  if (dump->parsed()) return cmd_dump_priors(dump_opts);
  return WSPTM_ERR_INPUT;
}
