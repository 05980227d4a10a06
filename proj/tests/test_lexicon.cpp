// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "procalign/lexicon.hpp"
#include "support/oracles.hpp"

using namespace procalign;

namespace {

EmbeddingSpace space_of(const std::vector<std::string>& words, const std::string& lang) {
  return EmbeddingSpace(words, oracle::random_matrix(words.size(), 3, words.size()), lang, true);
}

DictionaryParse parse(const std::string& text, const EmbeddingSpace& s, const EmbeddingSpace& t) {
  std::istringstream in(text);
  return parse_dictionary(in, s, t);
}

}  // namespace

TEST_CASE("dictionary parsing and coverage") {
  const auto src = space_of({"a", "b", "c"}, "en");
  const auto tgt = space_of({"x", "y", "z"}, "it");
  const auto full = parse("a x\nb y\n", src, tgt);
  CHECK(full.lexicon.pairs == std::vector<IndexPair>{{0, 0}, {1, 1}});
  CHECK(full.coverage() == 1.0);
  CHECK(full.lexicon.src_id == "en");
  CHECK(full.lexicon.tgt_id == "it");

  const auto tgt_missing = space_of({"x", "z"}, "it");
  const auto half = parse("a x\nb y\n", src, tgt_missing);
  CHECK(half.lexicon.pairs == std::vector<IndexPair>{{0, 0}});
  CHECK(half.coverage() == 0.5);
  CHECK(half.oov_lines == 1);

  // Alternatives for one source type: kept pairs count the type once.
  const auto alt = parse("a x\na y\nq z\n", src, tgt);
  CHECK(alt.lexicon.size() == 2);
  CHECK(alt.total_source_types == 2);
  CHECK(alt.kept_source_types == 1);

  // Repeated lines collapse.
  CHECK(parse("a x\na x\n\n", src, tgt).lexicon.size() == 1);

  CHECK_THROWS_AS(parse("a x extra\n", src, tgt), FormatError);
  CHECK_THROWS_AS(parse("a\n", src, tgt), FormatError);
  CHECK_THROWS_AS(parse("q w\n", src, tgt), EmptyLexiconError);
  CHECK_THROWS_AS(parse("", src, tgt), EmptyLexiconError);
  CHECK_THROWS_AS(parse_dictionary_file("/nonexistent.dict", src, tgt), FormatError);
}

TEST_CASE("dictionary parsing equals a brute-force membership filter") {
  std::vector<std::string> sv, tv, pool;
  for (int i = 0; i < 30; ++i) pool.push_back("w" + std::to_string(i));
  std::mt19937_64 rng(17);
  std::bernoulli_distribution keep(0.6);
  for (const auto& w : pool) {
    if (keep(rng)) sv.push_back(w);
    if (keep(rng)) tv.push_back(w + "_t");
  }
  const auto src = space_of(sv, "s");
  const auto tgt = space_of(tv, "t");

  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::string text;
  std::vector<std::pair<std::string, std::string>> lines;
  for (int i = 0; i < 50; ++i) {
    lines.emplace_back(pool[pick(rng)], pool[pick(rng)] + "_t");
    text += lines.back().first + " " + lines.back().second + "\n";
  }

  std::set<std::pair<std::string, std::string>> expected;
  for (const auto& [s, t] : lines) {
    const bool s_in = std::find(sv.begin(), sv.end(), s) != sv.end();
    const bool t_in = std::find(tv.begin(), tv.end(), t) != tv.end();
    if (s_in && t_in) expected.emplace(s, t);
  }
  const auto got = parse(text, src, tgt);
  std::set<std::pair<std::string, std::string>> got_words;
  for (const auto& p : got.lexicon.pairs) got_words.emplace(src.word(p.src), tgt.word(p.tgt));
  CHECK(got_words == expected);
  CHECK(got.lexicon.size() == expected.size());
}

TEST_CASE("identical-spelling seeds") {
  const auto a = space_of({"a", "b", "c"}, "A");
  const auto b = space_of({"d", "c", "b"}, "B");
  const auto seed = seed_identical(a, b);
  CHECK(seed.pairs == std::vector<IndexPair>{{1, 2}, {2, 1}});

  // Symmetric up to reversal.
  auto reversed = seed_identical(b, a);
  std::vector<IndexPair> flipped;
  for (const auto& p : seed.pairs) flipped.push_back({p.tgt, p.src});
  std::sort(flipped.begin(), flipped.end());
  std::sort(reversed.pairs.begin(), reversed.pairs.end());
  CHECK(flipped == reversed.pairs);

  CHECK_THROWS_AS(seed_identical(a, space_of({"x", "y"}, "C")), EmptyLexiconError);
  // Case is significant.
  CHECK_THROWS_AS(seed_identical(a, space_of({"A", "B"}, "C")), EmptyLexiconError);
}

TEST_CASE("numeral seeds") {
  const auto a = space_of({"dog", "1900", "2", "x1", "3"}, "A");
  const auto b = space_of({"2", "dog", "1900", "x1"}, "B");
  const auto seed = seed_numerals(a, b);
  CHECK(seed.pairs == std::vector<IndexPair>{{1, 2}, {2, 0}});
  CHECK(is_numeral("0042"));
  CHECK_FALSE(is_numeral(""));
  CHECK_FALSE(is_numeral("1.5"));
  CHECK_FALSE(is_numeral("١٢"));  // non-ASCII digits

  const auto identical = seed_identical(a, b);
  for (const auto& p : seed.pairs) {
    CHECK(std::find(identical.pairs.begin(), identical.pairs.end(), p) != identical.pairs.end());
  }
  CHECK_THROWS_AS(seed_numerals(space_of({"dog", "cat"}, "A"), space_of({"dog", "7"}, "B")),
                  EmptyLexiconError);
}

TEST_CASE("triangulation through a shared pivot") {
  PairLexicon l2{"en", "he", {{4, 1}}, true};
  PairLexicon l3{"en", "ar", {{4, 7}}, true};
  auto t = triangulate(l2, l3);
  CHECK(t.triples == std::vector<IndexTriple>{{4, 1, 7}});
  CHECK(t.pivot_id == "en");
  CHECK(t.l2_id == "he");
  CHECK(t.l3_id == "ar");

  PairLexicon many2{"en", "he", {{0, 1}, {0, 2}}, true};
  PairLexicon many3{"en", "ar", {{0, 5}, {0, 6}, {0, 7}}, true};
  CHECK(triangulate(many2, many3).size() == 6);

  PairLexicon other{"en", "ar", {{9, 5}}, true};
  CHECK(triangulate(l2, other).empty());

  PairLexicon wrong_pivot{"de", "ar", {{4, 7}}, true};
  CHECK_THROWS_AS(triangulate(l2, wrong_pivot), ShapeError);
}

TEST_CASE("triangulation size matches a nested-loop count") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> pivot(0, 9), other(0, 14);
  for (int trial = 0; trial < 20; ++trial) {
    PairLexicon a{"p", "a", {}, true};
    PairLexicon b{"p", "b", {}, true};
    for (int i = 0; i < 25; ++i) a.pairs.push_back({pivot(rng), other(rng)});
    for (int i = 0; i < 25; ++i) b.pairs.push_back({pivot(rng), other(rng)});
    deduplicate(a);
    deduplicate(b);

    std::set<IndexTriple> expected;
    for (const auto& x : a.pairs) {
      for (const auto& y : b.pairs) {
        if (x.src == y.src) expected.insert({x.src, x.tgt, y.tgt});
      }
    }
    const auto got = triangulate(a, b);
    const std::set<IndexTriple> got_set(got.triples.begin(), got.triples.end());
    CHECK(got.size() == expected.size());
    CHECK(got_set == expected);

    // Projection back to pivot–l2 pairs covers only pivots present in both.
    const auto projected = project_pivot_l2(got);
    for (const auto& p : projected.pairs) {
      CHECK(std::find(a.pairs.begin(), a.pairs.end(), p) != a.pairs.end());
    }
  }
}
