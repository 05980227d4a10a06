// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/synthkit.hpp"

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "procalign/log.hpp"

namespace procalign {
namespace {

enum Stream : std::uint32_t { kPlanted = 1, kRows = 2, kNoise = 3 };

std::mt19937_64 engine(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

OrthogonalMap haar_orthogonal(std::size_t dim, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  const Eigen::MatrixXd a = gaussian(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return OrthogonalMap(Matrix(q));
}

}  // namespace

OrthogonalMap random_orthogonal(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw ShapeError("random_orthogonal: dimension must be positive");
  auto rng = engine(seed, kPlanted);
  return haar_orthogonal(dim, rng);
}

SyntheticPair make_synthetic_pair(std::size_t n, std::size_t dim, double sigma, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw ShapeError("make_synthetic_pair: empty shape");
  if (sigma < 0.0) throw ShapeError("make_synthetic_pair: sigma must be non-negative");
  if (n < dim) warn("make_synthetic_pair: fewer rows than dimensions");

  auto rows_rng = engine(seed, kRows);
  auto noise_rng = engine(seed, kNoise);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(dim);

  Matrix e = gaussian(rows, cols, rows_rng);
  normalize_rows(e);
  OrthogonalMap planted = random_orthogonal(dim, seed);
  Matrix f = e * planted.matrix();
  if (sigma > 0.0) {
    f += (sigma / std::sqrt(static_cast<double>(dim))) * gaussian(rows, cols, noise_rng);
    normalize_rows(f);
  }
  return {std::move(e), std::move(f), std::move(planted), sigma, seed};
}

EmbeddingSpace synthetic_space(const Matrix& rows, std::string lang, bool normalized) {
  std::vector<std::string> words;
  words.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) words.push_back("w" + std::to_string(i));
  return EmbeddingSpace(std::move(words), rows, std::move(lang), normalized);
}

PairLexicon identity_lexicon(std::size_t n, const std::string& src_id, const std::string& tgt_id) {
  PairLexicon out{src_id, tgt_id, {}, true};
  out.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.pairs.push_back({i, i});
  return out;
}

}  // namespace procalign
