// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "procalign/common.hpp"

namespace procalign {

/// A monolingual embedding space: a frequency-ordered vocabulary (row 0 is
/// the most frequent word) and one row vector per word.
///
/// Immutable after construction. The constructor enforces the invariants:
/// unique tokens, finite entries, and unit rows when `normalized` is set.
class EmbeddingSpace {
 public:
  EmbeddingSpace(std::vector<std::string> words, Matrix vectors, std::string lang,
                 bool normalized);

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  const std::string& lang() const { return lang_; }
  bool normalized() const { return normalized_; }

  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t index) const { return words_.at(index); }
  const Matrix& vectors() const { return vectors_; }
  std::span<const double> row(std::size_t index) const;

  std::optional<std::size_t> lookup(std::string_view token) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> words_;
  Matrix vectors_;
  std::string lang_;
  bool normalized_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

struct LoadOptions {
  std::size_t max_vocab = 200000;
  bool unit_normalize = true;
  std::string lang;
};

/// Parses the "N d" header + "token v1 .. vd" text format. The first
/// occurrence of a token wins; reading stops after max_vocab accepted rows.
EmbeddingSpace load_embeddings(const std::filesystem::path& path, const LoadOptions& options);
EmbeddingSpace parse_embeddings(std::istream& in, const LoadOptions& options);

/// Writes the same text format with 17 significant digits, so a reload
/// reproduces the matrix exactly.
void write_embeddings(std::ostream& out, const EmbeddingSpace& space);
void write_embeddings(const std::filesystem::path& path, const EmbeddingSpace& space);

/// Scales every row to unit Euclidean norm. Throws FormatError on a zero row.
void normalize_rows(Matrix& m);

/// Row j of the result is row indices[j] of the space. Duplicates allowed.
Matrix gather_rows(const EmbeddingSpace& space, std::span<const std::size_t> indices);
Matrix gather_rows(const Matrix& m, std::span<const std::size_t> indices);

}  // namespace procalign
