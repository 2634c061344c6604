#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsptm/matrix.hpp"

namespace wsptm {

// Word <-> dense id mapping, ids assigned in first-occurrence order.
struct Vocabulary {
  std::vector<std::string> words;
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(words.size()); }
  // -1 when the word is not in the vocabulary.
  int id_of(const std::string& w) const {
    auto it = index.find(w);
    return it == index.end() ? -1 : it->second;
  }
  int add(const std::string& w) {
    auto [it, inserted] = index.emplace(w, size());
    if (inserted) words.push_back(w);
    return it->second;
  }
};

struct Document {
  int id = 0;
  std::vector<int> tokens;                  // word ids in text order, length N_d
  std::vector<std::pair<int, int>> tf;      // (word id, count), sorted by word id
  int gold_label = -1;                      // -1 = unlabeled; never read by training
  bool is_test = false;

  int n_tokens() const { return static_cast<int>(tokens.size()); }
};

struct Corpus {
  Vocabulary vocabulary;
  std::vector<Document> documents;
  int num_labels = 0;        // 0 when no document carries a gold label
  long long total_tokens = 0;
  int dropped_empty_docs = 0;

  int num_docs() const { return static_cast<int>(documents.size()); }
  int vocab_size() const { return vocabulary.size(); }
};

// Per-label seed word ids; disjoint after purification.
struct SeedWordSet {
  std::vector<std::vector<int>> sets;  // label -> sorted vocabulary ids

  int num_labels() const { return static_cast<int>(sets.size()); }
};

struct CorpusLoadOptions {
  int min_doc_freq = 1;       // keep words appearing in at least this many documents
  int min_word_len = 1;       // keep words at least this many characters long
  std::string stopwords_path; // optional, one word per line
};

// One document per line: `label TAB split TAB text`, label `-` = unlabeled,
// split is `train` or `test`. Tokens are lowercased runs of [a-z0-9].
Corpus load_corpus(const std::string& path, const CorpusLoadOptions& opts);

// One label per line: `label_id TAB word[,word...]`. Out-of-vocabulary seed
// words are dropped with a warning. With purify=true a word listed under
// several labels is kept for exactly one of them, chosen by rng_seed.
SeedWordSet load_seed_words(const std::string& path, const Corpus& corpus, bool purify,
                            std::uint64_t rng_seed);

struct SeedCounts {
  Matrix df;               // D x K: seed tokens of each label per document
  std::vector<double> tf;  // length V: corpus frequency of every word
};

SeedCounts count_seed_occurrences(const Corpus& corpus, const SeedWordSet& seeds);

// Order-sensitive FNV-1a over the vocabulary words; used to pair checkpoints
// with the corpus they were trained on.
std::uint64_t vocabulary_hash(const Vocabulary& vocab);

}  // namespace wsptm
