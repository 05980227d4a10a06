// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "procalign/embedspace.hpp"

namespace procalign {

struct IndexPair {
  std::size_t src = 0;
  std::size_t tgt = 0;
  auto operator<=>(const IndexPair&) const = default;
};

struct IndexTriple {
  std::size_t pivot = 0;
  std::size_t l2 = 0;
  std::size_t l3 = 0;
  auto operator<=>(const IndexTriple&) const = default;
};

/// Index-level translation pairs between two spaces, identified by their
/// language tags. A source index may occur with several targets.
struct PairLexicon {
  std::string src_id;
  std::string tgt_id;
  std::vector<IndexPair> pairs;
  bool unique = true;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  std::vector<std::size_t> src_indices() const;
  std::vector<std::size_t> tgt_indices() const;
};

struct TripleLexicon {
  std::string pivot_id;
  std::string l2_id;
  std::string l3_id;
  std::vector<IndexTriple> triples;

  std::size_t size() const { return triples.size(); }
  bool empty() const { return triples.empty(); }
};

struct DictionaryParse {
  PairLexicon lexicon;
  std::size_t total_lines = 0;
  std::size_t oov_lines = 0;
  std::size_t total_source_types = 0;
  std::size_t kept_source_types = 0;

  double coverage() const {
    return total_source_types == 0
               ? 0.0
               : static_cast<double>(kept_source_types) / static_cast<double>(total_source_types);
  }
};

/// Reads "src_word tgt_word" lines. Pairs with both words in vocabulary
/// become index pairs (deduplicated, file order); the rest count as OOV.
DictionaryParse parse_dictionary(std::istream& in, const EmbeddingSpace& src,
                                 const EmbeddingSpace& tgt);
DictionaryParse parse_dictionary_file(const std::filesystem::path& path,
                                      const EmbeddingSpace& src, const EmbeddingSpace& tgt);

void write_dictionary(std::ostream& out, const PairLexicon& lexicon, const EmbeddingSpace& src,
                      const EmbeddingSpace& tgt);

/// Cross-lingual homographs: tokens spelled identically in both vocabularies,
/// in source-rank order.
PairLexicon seed_identical(const EmbeddingSpace& src, const EmbeddingSpace& tgt);

/// Homographs made only of ASCII digits.
PairLexicon seed_numerals(const EmbeddingSpace& src, const EmbeddingSpace& tgt);

bool is_numeral(std::string_view token);

/// Every pivot index m with translations n (in pivot_l2) and l (in
/// pivot_l3) yields the triples (m, n, l).
TripleLexicon triangulate(const PairLexicon& pivot_l2, const PairLexicon& pivot_l3);

/// Pivot–l2 or pivot–l3 pairs of a triple lexicon, deduplicated, in order
/// of first appearance.
PairLexicon project_pivot_l2(const TripleLexicon& triples);
PairLexicon project_pivot_l3(const TripleLexicon& triples);

/// Order-preserving deduplication.
void deduplicate(PairLexicon& lexicon);

}  // namespace procalign
