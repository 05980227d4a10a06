// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/embedspace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace procalign {
namespace {

constexpr double kUnitTolerance = 1e-6;

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits on runs of spaces/tabs. A trailing '\r' is treated as whitespace.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_blank(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> words, Matrix vectors, std::string lang,
                               bool normalized)
    : words_(std::move(words)),
      vectors_(std::move(vectors)),
      lang_(std::move(lang)),
      normalized_(normalized) {
  if (static_cast<std::size_t>(vectors_.rows()) != words_.size()) {
    throw ShapeError("embedding space: " + std::to_string(words_.size()) + " words but " +
                     std::to_string(vectors_.rows()) + " rows");
  }
  if (vectors_.cols() < 1) throw ShapeError("embedding space: dimension must be positive");
  if (!vectors_.allFinite()) throw FormatError("embedding space: non-finite entry");
  index_.reserve(words_.size());
  for (std::size_t n = 0; n < words_.size(); ++n) {
    if (!index_.emplace(words_[n], n).second) {
      throw FormatError("embedding space: duplicate token '" + words_[n] + "'");
    }
  }
  if (normalized_) {
    for (Eigen::Index r = 0; r < vectors_.rows(); ++r) {
      if (std::abs(vectors_.row(r).norm() - 1.0) > kUnitTolerance) {
        throw FormatError("embedding space: row " + std::to_string(r) + " is not unit length");
      }
    }
  }
}

std::span<const double> EmbeddingSpace::row(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("embedding space: row index out of range");
  return {vectors_.data() + index * dim(), dim()};
}

std::optional<std::size_t> EmbeddingSpace::lookup(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void normalize_rows(Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double norm = m.row(r).norm();
    if (norm == 0.0) throw FormatError("cannot normalize zero vector at row " + std::to_string(r));
    m.row(r) /= norm;
  }
}

EmbeddingSpace parse_embeddings(std::istream& in, const LoadOptions& options) {
  if (options.max_vocab < 1) throw ShapeError("max_vocab must be positive");

  std::string line;
  if (!std::getline(in, line)) throw FormatError("embedding file: missing header");
  const auto header = split_fields(line);
  std::size_t declared_rows = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], declared_rows) ||
      !parse_number(header[1], dim) || dim == 0) {
    throw FormatError("embedding file: malformed header '" + line + "'");
  }

  const std::size_t capacity = std::min(declared_rows, options.max_vocab);
  std::vector<std::string> words;
  std::vector<double> values;
  words.reserve(capacity);
  values.reserve(capacity * dim);
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(capacity);

  std::size_t line_no = 1;
  while (words.size() < options.max_vocab && std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw FormatError("embedding file: line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size() - 1) + " values, expected " +
                        std::to_string(dim));
    }
    std::string token(fields[0]);
    if (seen.contains(token)) continue;
    const std::size_t offset = values.size();
    values.resize(offset + dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!parse_number(fields[j + 1], values[offset + j]) || !std::isfinite(values[offset + j])) {
        throw FormatError("embedding file: bad number '" + std::string(fields[j + 1]) +
                          "' on line " + std::to_string(line_no));
      }
    }
    seen.emplace(token, words.size());
    words.push_back(std::move(token));
  }

  if (words.size() < 2) throw FormatError("embedding file: fewer than 2 rows");

  Matrix vectors = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(words.size()),
                                      static_cast<Eigen::Index>(dim));
  if (options.unit_normalize) normalize_rows(vectors);
  return EmbeddingSpace(std::move(words), std::move(vectors), options.lang,
                        options.unit_normalize);
}

EmbeddingSpace load_embeddings(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open embedding file " + path.string());
  return parse_embeddings(in, options);
}

void write_embeddings(std::ostream& out, const EmbeddingSpace& space) {
  out << space.size() << ' ' << space.dim() << '\n';
  char buf[32];
  for (std::size_t n = 0; n < space.size(); ++n) {
    out << space.word(n);
    for (double v : space.row(n)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingSpace& space) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write embedding file " + path.string());
  write_embeddings(out, space);
  if (!out) throw FormatError("write failed for " + path.string());
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> indices) {
  Matrix out(static_cast<Eigen::Index>(indices.size()), m.cols());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= static_cast<std::size_t>(m.rows())) {
      throw std::out_of_range("gather_rows: index " + std::to_string(indices[j]) +
                              " out of range");
    }
    out.row(static_cast<Eigen::Index>(j)) = m.row(static_cast<Eigen::Index>(indices[j]));
  }
  return out;
}

Matrix gather_rows(const EmbeddingSpace& space, std::span<const std::size_t> indices) {
  return gather_rows(space.vectors(), indices);
}

}  // namespace procalign
