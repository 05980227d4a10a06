// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include <doctest.h>

#include <random>
#include <sstream>

#include "procalign/embedspace.hpp"
#include "support/oracles.hpp"

using namespace procalign;

namespace {

EmbeddingSpace parse(const std::string& text, bool normalize = true, std::size_t max_vocab = 200000) {
  std::istringstream in(text);
  return parse_embeddings(in, LoadOptions{max_vocab, normalize, "xx"});
}

}  // namespace

TEST_CASE("load normalizes rows and keeps file order") {
  const auto space = parse("2 3\na 1 0 0\nb 0 2 0\n");
  CHECK(space.size() == 2);
  CHECK(space.dim() == 3);
  CHECK(space.lang() == "xx");
  CHECK(space.normalized());
  CHECK(space.vectors().row(1) == Eigen::RowVector3d(0, 1, 0));
  CHECK(space.lookup("a") == 0u);
  CHECK(space.lookup("b") == 1u);
  CHECK_FALSE(space.lookup("zz").has_value());
}

TEST_CASE("first occurrence of a repeated token wins") {
  const auto space = parse("3 2\na 1 0\nb 0 1\na 0 -1\n", false);
  CHECK(space.size() == 2);
  CHECK(space.vectors()(0, 0) == 1.0);
  CHECK(space.words() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tabs, repeated spaces and CRLF are separators") {
  const auto space = parse("2 2\r\na\t1   2 \r\nb 3\t4\r\n", false);
  CHECK(space.vectors()(1, 1) == 4.0);
  CHECK(space.word(0) == "a");
}

TEST_CASE("max_vocab counts accepted rows, not lines") {
  const auto space = parse("4 1\na 1\na 2\nb 3\nc 4\n", false, 2);
  CHECK(space.words() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(parse(""), FormatError);
  CHECK_THROWS_AS(parse("2\na 1\nb 2\n"), FormatError);
  CHECK_THROWS_AS(parse("x 2\na 1 2\nb 1 2\n"), FormatError);
  CHECK_THROWS_AS(parse("2 3\na 1 0 0\nb 0 2\n"), FormatError);
  CHECK_THROWS_AS(parse("2 2\na 1 0\nb 0 0\n"), FormatError);
  CHECK_NOTHROW(parse("2 2\na 1 0\nb 0 0\n", false));
  CHECK_THROWS_AS(parse("1 2\na 1 0\n"), FormatError);
  CHECK_THROWS_AS(parse("2 2\na 1 0\na 0 1\n"), FormatError);  // one distinct row
  CHECK_THROWS_AS(parse("2 2\na 1 nan\nb 0 1\n"), FormatError);
  CHECK_THROWS_AS(parse("2 2\na 1 0x\nb 0 1\n"), FormatError);
  CHECK_THROWS_AS(load_embeddings("/nonexistent/file.vec", {}), FormatError);
}

TEST_CASE("constructor enforces the space invariants") {
  Matrix two(2, 2);
  two << 1, 0, 0, 1;
  CHECK_THROWS_AS(EmbeddingSpace({"a", "a"}, two, "x", true), FormatError);
  CHECK_THROWS_AS(EmbeddingSpace({"a"}, two, "x", true), ShapeError);
  Matrix scaled = 2.0 * two;
  CHECK_THROWS_AS(EmbeddingSpace({"a", "b"}, scaled, "x", true), FormatError);
  CHECK_NOTHROW(EmbeddingSpace({"a", "b"}, scaled, "x", false));
  Matrix bad = two;
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(EmbeddingSpace({"a", "b"}, bad, "x", false), FormatError);
}

TEST_CASE("write then reload reproduces a random space") {
  const Matrix m = oracle::random_matrix(100, 8, 42);
  std::vector<std::string> words;
  for (int i = 0; i < 100; ++i) words.push_back("tok" + std::to_string(i));
  const EmbeddingSpace space(words, m, "en", true);

  oracle::TempDir dir("emb");
  write_embeddings(dir / "space.vec", space);
  const auto back = load_embeddings(dir / "space.vec", LoadOptions{200000, true, "en"});
  REQUIRE(back.size() == 100);
  CHECK(back.words() == space.words());
  CHECK((back.vectors() - m).cwiseAbs().maxCoeff() <= 1e-6);

  // Load is deterministic.
  const auto again = load_embeddings(dir / "space.vec", LoadOptions{200000, true, "en"});
  CHECK(again.vectors() == back.vectors());
}

TEST_CASE("lookup is the inverse of the word list") {
  const Matrix m = oracle::random_matrix(300, 4, 3);
  std::vector<std::string> words;
  for (int i = 0; i < 300; ++i) words.push_back(std::to_string(i * 7919 % 1000) + "_w");
  const EmbeddingSpace space(words, m, "x", true);
  for (std::size_t n = 0; n < space.size(); ++n) CHECK(space.lookup(space.word(n)) == n);
}

TEST_CASE("normalization is idempotent") {
  Matrix m = oracle::random_matrix(50, 7, 5, false);
  normalize_rows(m);
  Matrix twice = m;
  normalize_rows(twice);
  CHECK((twice - m).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("gather_rows") {
  const auto space = parse("2 3\na 1 0 0\nb 0 2 0\n");
  const std::vector<std::size_t> swap{1, 0};
  const Matrix swapped = gather_rows(space, swap);
  CHECK(swapped.row(0) == space.vectors().row(1));
  CHECK(swapped.row(1) == space.vectors().row(0));

  const std::vector<std::size_t> dup{0, 0};
  const Matrix twice = gather_rows(space, dup);
  CHECK(twice.row(0) == twice.row(1));

  const std::vector<std::size_t> bad{2};
  CHECK_THROWS_AS(gather_rows(space, bad), std::out_of_range);

  const Matrix big = oracle::random_matrix(40, 5, 9);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, 39);
  std::vector<std::size_t> idx(100);
  for (auto& i : idx) i = pick(rng);
  const Matrix got = gather_rows(big, idx);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    for (Eigen::Index c = 0; c < 5; ++c) {
      CHECK(got(static_cast<Eigen::Index>(j), c) == big(static_cast<Eigen::Index>(idx[j]), c));
    }
  }
}
