#include "wsptm/corpus.hpp"

#include <random>

#include "doctest.h"
#include "synthetic.hpp"
#include "wsptm/errors.hpp"

using namespace wsptm;
using testsupport::write_temp_file;

namespace {

Corpus load_text(const std::string& text, CorpusLoadOptions opts = {}) {
  const std::string path = write_temp_file("corpus", text);
  return load_corpus(path, opts);
}

}  // namespace

TEST_CASE("single-character words are removed by the length filter") {
  CorpusLoadOptions opts;
  opts.min_word_len = 2;
  const Corpus corpus = load_text(
      "0\ttrain\ta cat sat\n"
      "0\ttrain\tthe cat ran\n"
      "1\ttest\ta dog sat\n",
      opts);
  CHECK(corpus.vocabulary.id_of("a") == -1);
  CHECK(corpus.vocabulary.id_of("cat") >= 0);
}

TEST_CASE("document frequency threshold is inclusive") {
  // "rare" appears in 4 of 10 documents; keep words in >= 5.
  std::string text;
  for (int i = 0; i < 10; ++i) {
    text += "0\ttrain\tcommon filler words here";
    if (i < 4) text += " rare";
    text += "\n";
  }
  CorpusLoadOptions opts;
  opts.min_doc_freq = 5;
  const Corpus corpus = load_text(text, opts);
  CHECK(corpus.vocabulary.id_of("rare") == -1);
  CHECK(corpus.vocabulary.id_of("common") >= 0);

  opts.min_doc_freq = 4;
  const Corpus again = load_text(text, opts);
  CHECK(again.vocabulary.id_of("rare") >= 0);
}

TEST_CASE("tokenizer lowercases and splits on non-alphanumeric") {
  const Corpus corpus = load_text("0\ttrain\tFoo-BAR baz42, (qux)\n0\ttrain\tfoo bar baz42 qux\n");
  CHECK(corpus.vocabulary.id_of("foo") >= 0);
  CHECK(corpus.vocabulary.id_of("bar") >= 0);
  CHECK(corpus.vocabulary.id_of("baz42") >= 0);
  CHECK(corpus.vocabulary.id_of("qux") >= 0);
  CHECK(corpus.vocabulary.id_of("Foo") == -1);
}

TEST_CASE("vocabulary ids follow first occurrence order") {
  const Corpus corpus = load_text("0\ttrain\tzebra apple\n1\ttest\tapple mango zebra\n");
  CHECK(corpus.vocabulary.id_of("zebra") == 0);
  CHECK(corpus.vocabulary.id_of("apple") == 1);
  CHECK(corpus.vocabulary.id_of("mango") == 2);
}

TEST_CASE("malformed lines report the line number") {
  CHECK_THROWS_WITH_AS(load_text("0\ttrain\tok fine\nbroken line\n"),
                       doctest::Contains("line 2"), InputError);
  CHECK_THROWS_AS(load_text("0\tvalidation\twords here\n"), InputError);
  CHECK_THROWS_AS(load_text("x\ttrain\twords here\n"), InputError);
}

TEST_CASE("documents left empty by filtering are dropped and counted") {
  CorpusLoadOptions opts;
  opts.min_word_len = 3;
  const Corpus corpus = load_text(
      "0\ttrain\tan it of\n"
      "1\ttrain\tlonger tokens survive\n"
      "0\ttest\tlonger tokens survive again\n",
      opts);
  CHECK(corpus.num_docs() == 2);
  CHECK(corpus.dropped_empty_docs == 1);
  CHECK(corpus.documents[0].id == 0);
  CHECK(corpus.documents[1].id == 1);
}

TEST_CASE("empty corpus after filtering is fatal") {
  CorpusLoadOptions opts;
  opts.min_word_len = 10;
  CHECK_THROWS_AS(load_text("0\ttrain\ttiny words only\n", opts), InputError);
}

TEST_CASE("stopword file is honored") {
  CorpusLoadOptions opts;
  opts.stopwords_path = write_temp_file("stop", "cat\n");
  const Corpus corpus = load_text("0\ttrain\tcat dog\n0\ttest\tcat dog bird\n", opts);
  CHECK(corpus.vocabulary.id_of("cat") == -1);
  CHECK(corpus.vocabulary.id_of("dog") >= 0);
}

TEST_CASE("gold labels and splits are carried through") {
  const Corpus corpus = load_text(
      "2\ttrain\tsome words here\n"
      "-\ttest\tother words there\n");
  CHECK(corpus.num_labels == 3);
  CHECK(corpus.documents[0].gold_label == 2);
  CHECK_FALSE(corpus.documents[0].is_test);
  CHECK(corpus.documents[1].gold_label == -1);
  CHECK(corpus.documents[1].is_test);
}

TEST_CASE("loading is deterministic") {
  const testsupport::SyntheticData data = testsupport::make_synthetic({});
  const std::string path = write_temp_file("corpus", data.corpus_text);
  const Corpus a = load_corpus(path, {});
  const Corpus b = load_corpus(path, {});
  REQUIRE(a.vocabulary.words == b.vocabulary.words);
  REQUIRE(a.num_docs() == b.num_docs());
  for (int d = 0; d < a.num_docs(); ++d) {
    CHECK(a.documents[d].tokens == b.documents[d].tokens);
    CHECK(a.documents[d].tf == b.documents[d].tf);
  }
}

TEST_CASE("token counts are consistent") {
  const auto loaded = testsupport::load_synthetic({.docs = 50});
  long long total = 0;
  for (const auto& doc : loaded.corpus.documents) {
    long long tf_sum = 0;
    for (const auto& [word, count] : doc.tf) {
      CHECK(word < loaded.corpus.vocab_size());
      tf_sum += count;
    }
    CHECK(tf_sum == doc.n_tokens());
    CHECK(doc.n_tokens() >= 1);
    total += doc.n_tokens();
  }
  CHECK(total == loaded.corpus.total_tokens);
}

TEST_CASE("seed words listed under two labels are purified to one") {
  const Corpus corpus = load_text(
      "0\ttrain\twindow glass door\n"
      "1\ttrain\twindow frame wall\n");
  const std::string seeds_path = write_temp_file("seeds", "0\twindow,glass\n1\twindow,frame\n");

  const SeedWordSet purified = load_seed_words(seeds_path, corpus, true, 42);
  const int window = corpus.vocabulary.id_of("window");
  int owners = 0;
  for (const auto& set : purified.sets)
    for (int id : set) owners += id == window;
  CHECK(owners == 1);

  // Same seed, same assignment.
  const SeedWordSet again = load_seed_words(seeds_path, corpus, true, 42);
  CHECK(purified.sets == again.sets);

  // Without purification the overlap stays.
  const SeedWordSet raw = load_seed_words(seeds_path, corpus, false, 42);
  owners = 0;
  for (const auto& set : raw.sets)
    for (int id : set) owners += id == window;
  CHECK(owners == 2);
}

TEST_CASE("out-of-vocabulary seed words are dropped") {
  const Corpus corpus = load_text("0\ttrain\tcat dog\n1\ttrain\tbird fish\n");
  const std::string seeds_path = write_temp_file("seeds", "0\tcat,unicorn\n1\tbird\n");
  const SeedWordSet seeds = load_seed_words(seeds_path, corpus, true, 1);
  CHECK(seeds.sets[0] == std::vector<int>{corpus.vocabulary.id_of("cat")});
  CHECK(seeds.sets[1] == std::vector<int>{corpus.vocabulary.id_of("bird")});
}

TEST_CASE("a label with no surviving seed words is fatal") {
  const Corpus corpus = load_text("0\ttrain\tcat dog\n1\ttrain\tbird fish\n");
  const std::string seeds_path = write_temp_file("seeds", "0\tcat\n1\tunicorn\n");
  CHECK_THROWS_WITH_AS(load_seed_words(seeds_path, corpus, true, 1), doctest::Contains("label 1"),
                       InputError);
}

TEST_CASE("seed labels beyond the corpus label range are rejected") {
  const Corpus corpus = load_text("0\ttrain\tcat dog\n1\ttrain\tbird fish\n");
  const std::string seeds_path = write_temp_file("seeds", "0\tcat\n5\tbird\n");
  CHECK_THROWS_AS(load_seed_words(seeds_path, corpus, true, 1), InputError);
}

TEST_CASE("an unlabeled corpus takes its label count from the seed file") {
  const Corpus corpus = load_text("-\ttrain\tcat dog\n-\ttest\tbird fish\n");
  REQUIRE(corpus.num_labels == 0);
  const std::string seeds_path = write_temp_file("seeds", "0\tcat\n1\tbird\n");
  const SeedWordSet seeds = load_seed_words(seeds_path, corpus, true, 1);
  CHECK(seeds.num_labels() == 2);
}

TEST_CASE("seed occurrence counting") {
  const Corpus corpus = load_text(
      "0\ttrain\tacquisition acquisition sale\n"
      "1\ttrain\tcoffee sale sale\n"
      "-\ttest\tsale sale\n");
  const std::string seeds_path = write_temp_file("seeds", "0\tacquisition\n1\tcoffee\n");
  const SeedWordSet seeds = load_seed_words(seeds_path, corpus, true, 1);
  const SeedCounts counts = count_seed_occurrences(corpus, seeds);

  CHECK(counts.df(0, 0) == 2.0);  // two acquisition tokens
  CHECK(counts.df(0, 1) == 0.0);
  CHECK(counts.df(1, 1) == 1.0);
  CHECK(counts.df(2, 0) == 0.0);  // no seeds at all
  CHECK(counts.df(2, 1) == 0.0);
  CHECK(counts.tf[corpus.vocabulary.id_of("sale")] == 5.0);
  CHECK(counts.tf[corpus.vocabulary.id_of("acquisition")] == 2.0);
}

TEST_CASE("seed tokens are a subset of document tokens") {
  const auto loaded = testsupport::load_synthetic({.docs = 120, .rng_seed = 99});
  const SeedCounts counts = count_seed_occurrences(loaded.corpus, loaded.seeds);
  for (const auto& doc : loaded.corpus.documents) {
    CHECK(row_sum(counts.df.row(doc.id)) <= doc.n_tokens());
  }
  double tf_total = 0;
  for (double x : counts.tf) tf_total += x;
  CHECK(tf_total == static_cast<double>(loaded.corpus.total_tokens));
}

TEST_CASE("vocabulary hash is order sensitive") {
  Vocabulary a, b;
  a.add("cat");
  a.add("dog");
  b.add("dog");
  b.add("cat");
  CHECK(vocabulary_hash(a) != vocabulary_hash(b));
  Vocabulary c;
  c.add("cat");
  c.add("dog");
  CHECK(vocabulary_hash(a) == vocabulary_hash(c));
}
