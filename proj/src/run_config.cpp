#include "wsptm/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wsptm/errors.hpp"

namespace wsptm {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw InputError("config key `" + key + "`: bad number `" + value + "`");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw InputError("config key `" + key + "`: bad integer `" + value + "`");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw InputError("config key `" + key + "`: bad boolean `" + value + "`");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "corpus") corpus_path = value;
  else if (key == "seeds") seeds_path = value;
  else if (key == "stopwords") stopwords_path = value;
  else if (key == "out") out_dir = value;
  else if (key == "mode") {
    if (value != "wsptm" && value != "lapswtm-baseline")
      throw InputError("config key `mode`: must be wsptm or lapswtm-baseline");
    mode = value;
  } else if (key == "min_doc_freq") load.min_doc_freq = static_cast<int>(parse_int(key, value));
  else if (key == "min_word_len") load.min_word_len = static_cast<int>(parse_int(key, value));
  else if (key == "purify_seeds") purify_seeds = parse_bool(key, value);
  else if (key == "rng_seed") model.rng_seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "eta") prior.eta = parse_double(key, value);
  else if (key == "alpha0") prior.alpha0 = parse_double(key, value);
  else if (key == "rho") prior.rho = parse_double(key, value);
  else if (key == "tau") prior.tau = parse_double(key, value);
  else if (key == "P") prior.pseudo_neighbors = static_cast<int>(parse_int(key, value));
  else if (key == "epsilon") prior.epsilon = parse_double(key, value);
  else if (key == "proto_base") prior.proto_base = parse_double(key, value);
  else if (key == "G") model.background_topics = static_cast<int>(parse_int(key, value));
  else if (key == "beta") model.beta = parse_double(key, value);
  else if (key == "beta_hat") model.beta_hat = parse_double(key, value);
  else if (key == "alpha_hat") model.alpha_hat = parse_double(key, value);
  else if (key == "lambda") model.lambda = parse_double(key, value);
  else if (key == "kappa") model.kappa = parse_double(key, value);
  else if (key == "max_iter") model.max_iter = static_cast<int>(parse_int(key, value));
  else if (key == "tol") model.tol = parse_double(key, value);
  else if (key == "k_neighbors") graph.k_neighbors = static_cast<int>(parse_int(key, value));
  else if (key == "graph_weighting") {
    if (value == "tf") graph.tfidf = false;
    else if (value == "tfidf") graph.tfidf = true;
    else throw InputError("config key `graph_weighting`: must be tf or tfidf");
  } else if (key == "eval_perplexity") eval_perplexity = parse_bool(key, value);
  else if (key == "fold_in_iters") fold_in_iters = static_cast<int>(parse_int(key, value));
  else if (key == "threads") {
    const int t = static_cast<int>(parse_int(key, value));
    model.threads = t;
    graph.threads = t;
  } else {
    throw InputError("unknown config key `" + key + "`");
  }
}

std::map<std::string, std::string> RunConfig::to_kv() const {
  std::map<std::string, std::string> kv;
  kv["corpus"] = corpus_path;
  kv["seeds"] = seeds_path;
  kv["stopwords"] = stopwords_path;
  kv["out"] = out_dir;
  kv["mode"] = mode;
  kv["min_doc_freq"] = std::to_string(load.min_doc_freq);
  kv["min_word_len"] = std::to_string(load.min_word_len);
  kv["purify_seeds"] = purify_seeds ? "true" : "false";
  kv["rng_seed"] = std::to_string(model.rng_seed);
  kv["eta"] = format_double(prior.eta);
  kv["alpha0"] = format_double(prior.alpha0);
  kv["rho"] = format_double(prior.rho);
  kv["tau"] = format_double(prior.tau);
  kv["P"] = std::to_string(prior.pseudo_neighbors);
  kv["epsilon"] = format_double(prior.epsilon);
  kv["proto_base"] = format_double(prior.proto_base);
  kv["G"] = std::to_string(model.background_topics);
  kv["beta"] = format_double(model.beta);
  kv["beta_hat"] = format_double(model.beta_hat);
  kv["alpha_hat"] = format_double(model.alpha_hat);
  kv["lambda"] = format_double(model.lambda);
  kv["kappa"] = format_double(model.kappa);
  kv["max_iter"] = std::to_string(model.max_iter);
  kv["tol"] = format_double(model.tol);
  kv["k_neighbors"] = std::to_string(graph.k_neighbors);
  kv["graph_weighting"] = graph.tfidf ? "tfidf" : "tf";
  kv["eval_perplexity"] = eval_perplexity ? "true" : "false";
  kv["fold_in_iters"] = std::to_string(fold_in_iters);
  kv["threads"] = std::to_string(model.threads);
  return kv;
}

RunConfig RunConfig::from_kv(const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  for (const auto& [key, value] : kv) cfg.set(key, value);
  return cfg;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(line_no) + ": expected key=value");
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const InputError& e) {
      throw InputError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string RunConfig::dump() const {
  std::ostringstream out;
  for (const auto& [key, value] : to_kv()) out << key << "=" << value << "\n";
  return out.str();
}

RunConfig RunConfig::effective() const {
  RunConfig cfg = *this;
  if (baseline_mode()) {
    cfg.prior.rho = 0.0;
    cfg.prior.tau = 0.0;
    cfg.prior.pseudo_neighbors = 0;
  }
  return cfg;
}

void RunConfig::validate() const {
  if (load.min_doc_freq < 1) throw InputError("min_doc_freq must be >= 1");
  if (load.min_word_len < 1) throw InputError("min_word_len must be >= 1");
  if (fold_in_iters < 1) throw InputError("fold_in_iters must be >= 1");
  prior.validate(0);  // label count re-checked once the seeds are loaded
  model.validate();
  if (graph.k_neighbors < 1) throw InputError("k_neighbors must be >= 1");
}

}  // namespace wsptm
