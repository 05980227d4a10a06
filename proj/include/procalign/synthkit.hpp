// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "procalign/embedspace.hpp"
#include "procalign/lexicon.hpp"
#include "procalign/solver.hpp"

namespace procalign {

// Generator contract (stable across versions):
//  * Engine: std::mt19937_64 seeded through std::seed_seq{seed_lo, seed_hi, stream}.
//  * Streams: 1 = planted map, 2 = source rows, 3 = noise.
//  * random_orthogonal: standard normal d×d, Householder QR, columns of Q
//    multiplied by sign(diag R) so the result is Haar distributed.
//  * Source rows: standard normal entries, rows scaled to unit norm.
//  * Noise: standard normal entries scaled by sigma / sqrt(d), so the
//    expected noise norm per row is about sigma. Target rows are renormalized
//    when sigma > 0.

OrthogonalMap random_orthogonal(std::size_t dim, std::uint64_t seed);

struct SyntheticPair {
  Matrix e;
  Matrix f;  // e · planted + noise
  OrthogonalMap planted;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

SyntheticPair make_synthetic_pair(std::size_t n, std::size_t dim, double sigma, std::uint64_t seed);

/// Wraps a matrix as an embedding space with tokens "w0".."w{N-1}".
EmbeddingSpace synthetic_space(const Matrix& rows, std::string lang, bool normalized = true);

/// (i, i) for i < n.
PairLexicon identity_lexicon(std::size_t n, const std::string& src_id, const std::string& tgt_id);

}  // namespace procalign
