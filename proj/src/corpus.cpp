#include "wsptm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_set>

#include "wsptm/errors.hpp"

namespace wsptm {

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::unordered_set<std::string> read_stopwords(const std::string& path) {
  std::unordered_set<std::string> stop;
  if (path.empty()) return stop;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stopword file: " + path);
  std::string word;
  while (in >> word) {
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    stop.insert(word);
  }
  return stop;
}

struct RawDoc {
  int gold_label;
  bool is_test;
  std::vector<std::string> tokens;
};

}  // namespace

Corpus load_corpus(const std::string& path, const CorpusLoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file: " + path);
  const auto stopwords = read_stopwords(opts.stopwords_path);

  std::vector<RawDoc> raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw InputError("corpus line " + std::to_string(line_no) +
                       ": expected `label TAB split TAB text`");
    const std::string label_field = line.substr(0, tab1);
    const std::string split_field = line.substr(tab1 + 1, tab2 - tab1 - 1);

    RawDoc doc;
    if (label_field == "-") {
      doc.gold_label = -1;
    } else {
      try {
        std::size_t pos = 0;
        doc.gold_label = std::stoi(label_field, &pos);
        if (pos != label_field.size() || doc.gold_label < 0) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw InputError("corpus line " + std::to_string(line_no) + ": bad label `" +
                         label_field + "` (non-negative integer or `-`)");
      }
    }
    if (split_field == "train") {
      doc.is_test = false;
    } else if (split_field == "test") {
      doc.is_test = true;
    } else {
      throw InputError("corpus line " + std::to_string(line_no) + ": bad split `" + split_field +
                       "` (train or test)");
    }

    for (auto& tok : tokenize(line.substr(tab2 + 1))) {
      if (static_cast<int>(tok.size()) < opts.min_word_len) continue;
      if (stopwords.count(tok)) continue;
      doc.tokens.push_back(std::move(tok));
    }
    raw.push_back(std::move(doc));
  }

  // Document frequencies over the length/stopword-filtered tokens.
  std::unordered_map<std::string, int> doc_freq;
  for (const auto& doc : raw) {
    std::unordered_set<std::string> seen;
    for (const auto& tok : doc.tokens)
      if (seen.insert(tok).second) ++doc_freq[tok];
  }

  Corpus corpus;
  auto retained = [&](const std::string& tok) { return doc_freq.at(tok) >= opts.min_doc_freq; };

  for (auto& doc : raw) {
    Document d;
    d.gold_label = doc.gold_label;
    d.is_test = doc.is_test;
    std::map<int, int> counts;
    for (const auto& tok : doc.tokens) {
      if (!retained(tok)) continue;
      const int id = corpus.vocabulary.add(tok);
      d.tokens.push_back(id);
      ++counts[id];
    }
    if (d.tokens.empty()) {
      ++corpus.dropped_empty_docs;
      continue;
    }
    d.id = corpus.num_docs();
    d.tf.assign(counts.begin(), counts.end());
    corpus.total_tokens += d.n_tokens();
    if (d.gold_label >= 0) corpus.num_labels = std::max(corpus.num_labels, d.gold_label + 1);
    corpus.documents.push_back(std::move(d));
  }

  if (corpus.documents.empty())
    throw InputError("corpus is empty after preprocessing: " + path);
  if (corpus.dropped_empty_docs > 0)
    std::cerr << "[wsptm] dropped " << corpus.dropped_empty_docs
              << " document(s) left empty by preprocessing\n";
  return corpus;
}

SeedWordSet load_seed_words(const std::string& path, const Corpus& corpus, bool purify,
                            std::uint64_t rng_seed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open seed word file: " + path);

  std::map<int, std::vector<std::string>> by_label;
  std::string line;
  int line_no = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw InputError("seed line " + std::to_string(line_no) +
                       ": expected `label_id TAB word[,word...]`");
    int label;
    try {
      std::size_t pos = 0;
      label = std::stoi(line.substr(0, tab), &pos);
      if (label < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InputError("seed line " + std::to_string(line_no) + ": bad label id");
    }
    max_label = std::max(max_label, label);

    // Normalize exactly like corpus tokens; multi-word entries become
    // independent unigrams under the same label.
    for (auto& tok : tokenize(line.substr(tab + 1)))
      by_label[label].push_back(std::move(tok));
  }
  if (max_label < 0) throw InputError("seed word file has no entries: " + path);

  const int k = corpus.num_labels > 0 ? corpus.num_labels : max_label + 1;
  if (max_label >= k)
    throw InputError("seed word file references label " + std::to_string(max_label) +
                     " but the corpus has " + std::to_string(k) + " labels");

  // Resolve words against the vocabulary, dropping what is not in it.
  std::vector<std::vector<int>> sets(k);
  for (auto& [label, words] : by_label) {
    for (const auto& w : words) {
      const int id = corpus.vocabulary.id_of(w);
      if (id < 0) {
        std::cerr << "[wsptm] seed word `" << w << "` (label " << label
                  << ") is not in the vocabulary, dropped\n";
        continue;
      }
      sets[label].push_back(id);
    }
  }
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  if (purify) {
    // Map word -> labels listing it, visit words in id order so the draw
    // sequence is fixed by rng_seed alone.
    std::map<int, std::vector<int>> owners;
    for (int label = 0; label < k; ++label)
      for (int id : sets[label]) owners[id].push_back(label);
    std::mt19937_64 rng(rng_seed);
    for (auto& [id, labels] : owners) {
      if (labels.size() < 2) continue;
      const int keep = labels[std::uniform_int_distribution<std::size_t>(0, labels.size() - 1)(rng)];
      for (int label : labels) {
        if (label == keep) continue;
        auto& s = sets[label];
        s.erase(std::remove(s.begin(), s.end(), id), s.end());
      }
    }
  }

  for (int label = 0; label < k; ++label)
    if (sets[label].empty())
      throw InputError("label " + std::to_string(label) +
                       " has no seed words left after filtering");

  SeedWordSet out;
  out.sets = std::move(sets);
  return out;
}

SeedCounts count_seed_occurrences(const Corpus& corpus, const SeedWordSet& seeds) {
  const int d_count = corpus.num_docs();
  const int k = seeds.num_labels();
  SeedCounts counts;
  counts.df = Matrix(d_count, k);
  counts.tf.assign(corpus.vocab_size(), 0.0);

  std::vector<std::vector<int>> labels_of(corpus.vocab_size());
  for (int label = 0; label < k; ++label)
    for (int id : seeds.sets[label]) labels_of[id].push_back(label);

  for (const auto& doc : corpus.documents) {
    for (const auto& [word, count] : doc.tf) {
      counts.tf[word] += count;
      for (int label : labels_of[word]) counts.df(doc.id, label) += count;
    }
  }
  return counts;
}

std::uint64_t vocabulary_hash(const Vocabulary& vocab) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& w : vocab.words) {
    for (unsigned char c : w) mix(c);
    mix(0);
  }
  return h;
}

}  // namespace wsptm
