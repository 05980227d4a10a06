// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "procalign/common.hpp"
#include "procalign/embedspace.hpp"
#include "procalign/lexicon.hpp"
#include "procalign/solver.hpp"

namespace procalign {

enum class Metric { Cosine, Csls };

std::string_view metric_name(Metric metric);

/// Exact top-k neighbours per query. Scores are descending; equal scores are
/// ordered by lower key index.
struct NeighborList {
  Metric metric = Metric::Cosine;
  std::size_t k = 0;
  std::vector<std::size_t> indices;  // queries × k, row-major
  std::vector<double> scores;

  std::size_t queries() const { return k == 0 ? 0 : indices.size() / k; }
  std::span<const std::size_t> indices_of(std::size_t q) const {
    return std::span(indices).subspan(q * k, k);
  }
  std::span<const double> scores_of(std::size_t q) const {
    return std::span(scores).subspan(q * k, k);
  }
};

/// Top-k keys by dot product (cosine for unit rows).
NeighborList cosine_topk(const Matrix& queries, const Matrix& keys, std::size_t k);

/// Neighbourhood densities for CSLS:
///   src[x] = mean cosine of mapped source row x to its k nearest target rows,
///   tgt[y] = mean cosine of target row y to its k nearest mapped source rows.
struct CslsDensities {
  std::size_t k = 0;
  std::vector<double> src;
  std::vector<double> tgt;
};

CslsDensities csls_densities(const Matrix& mapped_src, const Matrix& tgt, std::size_t k_density);

/// score(x, y) = 2·cos(x, y) − query_density[x] − key_density[y], ranked
/// over every key row for the query rows listed. Both directions use this:
/// pass (mapped_src, tgt, d.src, d.tgt) for source→target and
/// (tgt, mapped_src, d.tgt, d.src) for target→source.
NeighborList csls_rank(const Matrix& query_space, const Matrix& key_space,
                       std::span<const double> query_density,
                       std::span<const double> key_density,
                       std::span<const std::size_t> query_rows, std::size_t k);

/// CSLS top-k for every mapped source row.
NeighborList csls_topk(const Matrix& mapped_src, const Matrix& tgt, std::size_t k_out,
                       std::size_t k_density = 10);

/// Top-k for selected query rows under either metric.
NeighborList rank_rows(const Matrix& mapped_src, const Matrix& tgt,
                       std::span<const std::size_t> query_rows, std::size_t k, Metric metric,
                       std::size_t k_density = 10);

enum class RankFilter {
  Both,        // source and target frequency ranks below rank_max
  SourceOnly,  // only the source rank is constrained
};

struct InduceOptions {
  std::size_t rank_max = 15000;
  bool mutual = true;
  std::size_t k_density = 10;
  RankFilter filter = RankFilter::Both;
  std::string src_id;
  std::string tgt_id;
  bool warn_on_clamp = true;
};

/// Bootstrap dictionary: each of the rank_max most frequent source words
/// proposes its CSLS top-1 target; with `mutual`, the target's CSLS top-1
/// source must be the proposer. Sorted by source rank.
PairLexicon induce_dictionary(const Matrix& mapped_src, const Matrix& tgt,
                              const InduceOptions& options);
PairLexicon induce_dictionary(const Matrix& mapped_src, const Matrix& tgt,
                              const CslsDensities& densities, const InduceOptions& options);
/// Same, reusing a CSLS top-1 ranking of the leading source rows (at least
/// min(rank_max, N_src) of them, as produced by csls_rank with k = 1).
PairLexicon induce_dictionary(const Matrix& mapped_src, const Matrix& tgt,
                              const CslsDensities& densities, const NeighborList& forward_top1,
                              const InduceOptions& options);

struct Translation {
  std::string word;
  std::size_t src_index = 0;
  std::vector<std::size_t> targets;
  std::vector<double> scores;
};

struct TranslationResult {
  std::vector<Translation> scored;  // input order, OOV words omitted
  std::vector<std::string> oov;
};

/// Token-level wrapper: maps the source space with `map` (already composed
/// into the target space) and ranks target words for each in-vocabulary
/// query.
TranslationResult translate_topk(std::span<const std::string> words, const EmbeddingSpace& src,
                                 const EmbeddingSpace& tgt, const OrthogonalMap& map,
                                 std::size_t k, Metric metric, std::size_t k_density = 10);

}  // namespace procalign
