#include <cstdio>
#include <filesystem>
#include <fstream>

#include "causreg/text.hpp"
#include "doctest.h"

using namespace causreg;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

Corpus tiny_paired_corpus() {
  Corpus c;
  const auto add = [&](const std::string& text, int label, Split split) {
    Document d;
    d.text = text;
    d.label = label;
    d.split = split;
    c.docs.push_back(d);
    return c.docs.size() - 1;
  };
  const auto pair = [&](std::size_t a, std::size_t b) {
    c.docs[a].counterfactual_of = b;
    c.docs[b].counterfactual_of = a;
  };
  const auto t0 = add("great fun dull film", 1, Split::train);
  const auto t0c = add("awful dull film", 0, Split::ctf_train);
  pair(t0, t0c);
  const auto t1 = add("dull plot bad acting", 0, Split::train);
  const auto t1c = add("gripping plot great acting", 1, Split::ctf_train);
  pair(t1, t1c);
  const auto v0 = add("fun ride great", 1, Split::validation);
  const auto v0c = add("dull ride awful", 0, Split::ctf_validation);
  pair(v0, v0c);
  const auto e0 = add("bad film dull", 0, Split::test);
  const auto e0c = add("great film fun", 1, Split::ctf_test);
  pair(e0, e0c);
  return c;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("The film, directed by Spielberg!") ==
        std::vector<std::string>{"the", "film", "directed", "by", "spielberg"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("A a A") == std::vector<std::string>{"a", "a", "a"});
  CHECK(tokenize("  spaced\tout\nwords  ") ==
        std::vector<std::string>{"spaced", "out", "words"});
  CHECK(tokenize("it's fine") == std::vector<std::string>{"its", "fine"});
}

TEST_CASE("vocabulary fitting") {
  Corpus c = tiny_paired_corpus();
  const Vocabulary vocab = Vocabulary::fit(c);

  SUBCASE("training split only, first-occurrence order") {
    CHECK(vocab.tokens() == std::vector<std::string>{"great", "fun", "dull",
                                                     "film", "plot", "bad",
                                                     "acting"});
    CHECK(!vocab.index_of("gripping"));  // only in ctf_train
    CHECK(!vocab.index_of("ride"));      // only in validation
  }

  SUBCASE("re-fitting with extra non-train docs changes nothing") {
    Corpus extended = c;
    Document extra;
    extra.text = "totally new tokens here";
    extra.label = 1;
    extra.split = Split::test;
    extended.docs.push_back(extra);
    const Vocabulary v2 = Vocabulary::fit(extended);
    CHECK(v2.tokens() == vocab.tokens());
  }

  SUBCASE("min_df filters rare tokens") {
    // df: film 1? -> appears in train docs 0 ("great fun film") only; dull in
    // both train docs.
    const Vocabulary v2 = Vocabulary::fit(c, 2);
    CHECK(v2.index_of("dull").has_value());
    CHECK(!v2.index_of("plot"));
  }
}

TEST_CASE("vectorize_bow") {
  Corpus c = tiny_paired_corpus();
  const Vocabulary vocab = Vocabulary::fit(c);

  SUBCASE("binary entries and independent membership oracle") {
    const SplitData train = vectorize_bow(c, Split::train, vocab);
    CHECK(train.x.rows() == 2);
    CHECK(train.x.cols() == vocab.size());
    const auto train_rows = c.rows_of(Split::train);
    for (std::size_t i = 0; i < train.x.rows(); ++i) {
      const auto toks = tokenize(c.docs[train_rows[i]].text);
      for (std::size_t j = 0; j < vocab.size(); ++j) {
        const bool member =
            std::find(toks.begin(), toks.end(), vocab.tokens()[j]) != toks.end();
        CHECK(train.x.at(i, j) == (member ? 1.0 : 0.0));
      }
    }
  }

  SUBCASE("repetition stays binary") {
    Corpus rep;
    Document d;
    d.text = "echo echo echo echo echo";
    d.label = 1;
    rep.docs.push_back(d);
    const Vocabulary v = Vocabulary::fit(rep);
    const SplitData s = vectorize_bow(rep, Split::train, v);
    CHECK(s.x.at(0, 0) == 1.0);
    CHECK(s.x.binary_row(0).size() == 1);
  }

  SUBCASE("only-OOV document becomes an all-zero row") {
    const SplitData val = vectorize_bow(c, Split::validation, vocab);
    // "fun ride great": ride is OOV; row has exactly fun+great.
    CHECK(val.x.binary_row(0).size() == 2);
    Corpus oov;
    Document d;
    d.text = "zzz qqq";
    d.label = 0;
    d.split = Split::test;
    oov.docs.push_back(d);
    const SplitData s = vectorize_bow(oov, Split::test, vocab);
    CHECK(s.x.binary_row(0).empty());
  }
}

TEST_CASE("corpus TSV round trip") {
  Corpus c = tiny_paired_corpus();
  c.docs[0].sensitive = "g1";
  for (std::size_t i = 1; i < c.docs.size(); ++i) c.docs[i].sensitive = "g0";
  const auto path = temp_file("causreg_corpus_test.tsv");
  save_corpus_tsv(path.string(), c);
  const Corpus back = load_corpus_tsv(path.string());
  REQUIRE(back.docs.size() == c.docs.size());
  for (std::size_t i = 0; i < c.docs.size(); ++i) {
    CHECK(back.docs[i].text == c.docs[i].text);
    CHECK(back.docs[i].label == c.docs[i].label);
    CHECK(back.docs[i].split == c.docs[i].split);
    CHECK(back.docs[i].counterfactual_of == c.docs[i].counterfactual_of);
    CHECK(back.docs[i].sensitive == c.docs[i].sensitive);
  }
  std::filesystem::remove(path);
}

TEST_CASE("corpus pairing validation") {
  Corpus c = tiny_paired_corpus();
  SUBCASE("valid corpus passes") { c.validate_pairing(); }
  SUBCASE("equal labels across a pair are rejected") {
    c.docs[1].label = c.docs[0].label;
    CHECK_THROWS_AS(c.validate_pairing(), DataError);
  }
  SUBCASE("asymmetric links are rejected") {
    c.docs[1].counterfactual_of = 3;
    CHECK_THROWS_AS(c.validate_pairing(), DataError);
  }
  SUBCASE("twin(twin(i)) == i holds everywhere") {
    for (std::size_t i = 0; i < c.docs.size(); ++i) {
      REQUIRE(c.docs[i].counterfactual_of.has_value());
      const std::size_t j = *c.docs[i].counterfactual_of;
      CHECK(*c.docs[j].counterfactual_of == i);
      CHECK(c.docs[i].label == 1 - c.docs[j].label);
    }
  }
}

TEST_CASE("filter_kindle") {
  std::vector<RatedReview> reviews;
  reviews.push_back({"one two three four", "5"});                    // 4 words
  reviews.push_back({"one two three four five", "5"});               // kept, 1
  reviews.push_back({"bad bad bad bad bad awful", "1"});             // kept, 0
  reviews.push_back({"meh meh meh meh meh", "3"});                   // rating 3
  reviews.push_back({"nice nice nice nice nice", "banana"});         // malformed
  reviews.push_back({"ok ok ok ok ok", "6"});                        // malformed
  std::string forty;
  for (int i = 0; i < 40; ++i) forty += "w" + std::to_string(i) + " ";
  reviews.push_back({forty, "4"});  // exactly 40 words, kept, label 1
  std::string fortyone;
  for (int i = 0; i < 41; ++i) fortyone += "w" + std::to_string(i) + " ";
  reviews.push_back({fortyone, "4"});  // 41 words, dropped

  const Corpus c = filter_kindle(reviews);
  REQUIRE(c.docs.size() == 3);
  CHECK(c.docs[0].label == 1);
  CHECK(c.docs[1].label == 0);
  CHECK(c.docs[2].label == 1);
  CHECK(tokenize(c.docs[2].text).size() == 40);
}

TEST_CASE("augment_with_counterfactuals") {
  SUBCASE("training set doubles with flipped twin labels") {
    Corpus c = tiny_paired_corpus();
    const std::size_t before = c.rows_of(Split::train).size();
    const Corpus aug = augment_with_counterfactuals(c);
    const auto rows = aug.rows_of(Split::train);
    CHECK(rows.size() == 2 * before);
    int pos = 0;
    for (std::size_t i : rows) pos += aug.docs[i].label;
    CHECK(pos == static_cast<int>(before));  // one flip per original
  }
  SUBCASE("missing twins are reported") {
    Corpus c = tiny_paired_corpus();
    c.docs[0].counterfactual_of.reset();
    c.docs[1].counterfactual_of.reset();
    CHECK_THROWS_WITH_AS(augment_with_counterfactuals(c),
                         doctest::Contains("without counterfactual twins"),
                         DataError);
  }
  SUBCASE("paper-sized pairing: 1707 originals become 3414 rows") {
    Corpus c;
    for (int i = 0; i < 1707; ++i) {
      Document d;
      d.text = "tok" + std::to_string(i % 50);
      d.label = i % 2;
      d.split = Split::train;
      c.docs.push_back(d);
      Document t = d;
      t.label = 1 - d.label;
      t.split = Split::ctf_train;
      c.docs.push_back(t);
      c.docs[c.docs.size() - 2].counterfactual_of = c.docs.size() - 1;
      c.docs[c.docs.size() - 1].counterfactual_of = c.docs.size() - 2;
    }
    const Corpus aug = augment_with_counterfactuals(c);
    CHECK(aug.rows_of(Split::train).size() == 3414);
  }
}

TEST_CASE("bundle_from_corpus_bow resolves groups and splits") {
  Corpus c = tiny_paired_corpus();
  const Vocabulary vocab = Vocabulary::fit(c);
  GroupLexicon lex;
  lex.causal = {"great", "fun", "dull", "bad", "gripping"};
  lex.spurious = {"film"};
  const DatasetBundle b = bundle_from_corpus_bow(c, vocab, lex);
  CHECK(b.feature_names == vocab.tokens());
  CHECK(b.groups.causal().size() == 4);  // gripping is not in the vocabulary
  CHECK(b.groups.spurious().size() == 1);
  CHECK(b.train.x.rows() == 2);
  REQUIRE(b.ctf_test.has_value());
  CHECK(b.ctf_test->x.rows() == 1);
  CHECK(b.ctf_test->y[0] == 1);
}
