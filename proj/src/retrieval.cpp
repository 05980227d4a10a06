// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/retrieval.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "procalign/log.hpp"
#include "procalign/simd/kernels.hpp"

namespace procalign {
namespace {

bool ranks_before(const std::vector<double>& s, std::size_t a, std::size_t b) {
  return s[a] > s[b] || (s[a] == s[b] && a < b);
}

// Writes the k best (score desc, index asc) entries of `scores`.
void select_topk(const std::vector<double>& scores, std::size_t k, std::vector<std::size_t>& order,
                 std::size_t* idx_out, double* score_out) {
  if (k == 1) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.size(); ++j) {
      if (scores[j] > scores[best]) best = j;
    }
    *idx_out = best;
    *score_out = scores[best];
    return;
  }
  order.resize(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto cmp = [&](std::size_t a, std::size_t b) { return ranks_before(scores, a, b); };
  if (k < order.size()) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), cmp);
  }
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), cmp);
  for (std::size_t r = 0; r < k; ++r) {
    idx_out[r] = order[r];
    score_out[r] = scores[order[r]];
  }
}

std::span<const double> row_of(const Matrix& m, std::size_t r) {
  return {m.data() + r * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

std::span<const double> all_of(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

void check_pair(const Matrix& queries, const Matrix& keys, std::size_t k) {
  if (keys.rows() == 0) throw ShapeError("retrieval: empty key set");
  if (queries.cols() != keys.cols()) throw ShapeError("retrieval: dimension mismatch");
  if (k == 0 || k > static_cast<std::size_t>(keys.rows())) {
    throw ShapeError("retrieval: k = " + std::to_string(k) + " with " +
                     std::to_string(keys.rows()) + " keys");
  }
}

// Mean of the k largest dot products of every row of `from` against `to`.
std::vector<double> mean_topk_similarity(const Matrix& from, const Matrix& to, std::size_t k) {
  const auto n_to = static_cast<std::size_t>(to.rows());
  std::vector<double> out(static_cast<std::size_t>(from.rows()));
  std::vector<double> sims(n_to);
  for (std::size_t r = 0; r < out.size(); ++r) {
    simd::dot_rows(row_of(from, r), all_of(to), static_cast<std::size_t>(to.cols()), sims);
    std::nth_element(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k - 1), sims.end(),
                     std::greater<>());
    std::sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), std::greater<>());
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += sims[i];
    out[r] = sum / static_cast<double>(k);
  }
  return out;
}

std::vector<std::size_t> first_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

std::string_view metric_name(Metric metric) {
  return metric == Metric::Csls ? "csls" : "cosine";
}

NeighborList cosine_topk(const Matrix& queries, const Matrix& keys, std::size_t k) {
  const auto rows = first_rows(static_cast<std::size_t>(queries.rows()));
  return rank_rows(queries, keys, rows, k, Metric::Cosine);
}

CslsDensities csls_densities(const Matrix& mapped_src, const Matrix& tgt, std::size_t k_density) {
  if (mapped_src.cols() != tgt.cols()) throw ShapeError("CSLS: dimension mismatch");
  if (k_density == 0 || k_density > static_cast<std::size_t>(tgt.rows()) ||
      k_density > static_cast<std::size_t>(mapped_src.rows())) {
    throw ShapeError("CSLS: k_density = " + std::to_string(k_density) + " exceeds a space size");
  }
  CslsDensities out;
  out.k = k_density;
  out.src = mean_topk_similarity(mapped_src, tgt, k_density);
  out.tgt = mean_topk_similarity(tgt, mapped_src, k_density);
  return out;
}

NeighborList csls_rank(const Matrix& query_space, const Matrix& key_space,
                       std::span<const double> query_density,
                       std::span<const double> key_density,
                       std::span<const std::size_t> query_rows, std::size_t k) {
  check_pair(query_space, key_space, k);
  const auto n_keys = static_cast<std::size_t>(key_space.rows());
  if (query_density.size() != static_cast<std::size_t>(query_space.rows()) ||
      key_density.size() != n_keys) {
    throw ShapeError("CSLS: density vectors do not match the spaces");
  }
  NeighborList out;
  out.metric = Metric::Csls;
  out.k = k;
  out.indices.resize(query_rows.size() * k);
  out.scores.resize(query_rows.size() * k);
  std::vector<double> scores(n_keys);
  std::vector<std::size_t> order;
  for (std::size_t q = 0; q < query_rows.size(); ++q) {
    const std::size_t x = query_rows[q];
    if (x >= static_cast<std::size_t>(query_space.rows())) {
      throw std::out_of_range("CSLS: query row out of range");
    }
    simd::dot_rows(row_of(query_space, x), all_of(key_space),
                   static_cast<std::size_t>(key_space.cols()), scores);
    // The density sum is formed first so that swapping the roles of the two
    // spaces yields bitwise identical scores.
    const double rx = query_density[x];
    for (std::size_t y = 0; y < n_keys; ++y) scores[y] = 2.0 * scores[y] - (rx + key_density[y]);
    select_topk(scores, k, order, &out.indices[q * k], &out.scores[q * k]);
  }
  return out;
}

NeighborList csls_topk(const Matrix& mapped_src, const Matrix& tgt, std::size_t k_out,
                       std::size_t k_density) {
  check_pair(mapped_src, tgt, k_out);
  const auto densities = csls_densities(mapped_src, tgt, k_density);
  const auto rows = first_rows(static_cast<std::size_t>(mapped_src.rows()));
  return csls_rank(mapped_src, tgt, densities.src, densities.tgt, rows, k_out);
}

NeighborList rank_rows(const Matrix& mapped_src, const Matrix& tgt,
                       std::span<const std::size_t> query_rows, std::size_t k, Metric metric,
                       std::size_t k_density) {
  check_pair(mapped_src, tgt, k);
  if (metric == Metric::Csls) {
    const auto densities = csls_densities(mapped_src, tgt, k_density);
    return csls_rank(mapped_src, tgt, densities.src, densities.tgt, query_rows, k);
  }
  NeighborList out;
  out.metric = Metric::Cosine;
  out.k = k;
  out.indices.resize(query_rows.size() * k);
  out.scores.resize(query_rows.size() * k);
  std::vector<double> scores(static_cast<std::size_t>(tgt.rows()));
  std::vector<std::size_t> order;
  for (std::size_t q = 0; q < query_rows.size(); ++q) {
    if (query_rows[q] >= static_cast<std::size_t>(mapped_src.rows())) {
      throw std::out_of_range("retrieval: query row out of range");
    }
    simd::dot_rows(row_of(mapped_src, query_rows[q]), all_of(tgt),
                   static_cast<std::size_t>(tgt.cols()), scores);
    select_topk(scores, k, order, &out.indices[q * k], &out.scores[q * k]);
  }
  return out;
}

PairLexicon induce_dictionary(const Matrix& mapped_src, const Matrix& tgt,
                              const InduceOptions& options) {
  const auto densities = csls_densities(mapped_src, tgt, options.k_density);
  return induce_dictionary(mapped_src, tgt, densities, options);
}

PairLexicon induce_dictionary(const Matrix& mapped_src, const Matrix& tgt,
                              const CslsDensities& densities, const InduceOptions& options) {
  const auto n_src = static_cast<std::size_t>(mapped_src.rows());
  const auto queries = first_rows(std::min(std::max<std::size_t>(options.rank_max, 1), n_src));
  const auto forward = csls_rank(mapped_src, tgt, densities.src, densities.tgt, queries, 1);
  return induce_dictionary(mapped_src, tgt, densities, forward, options);
}

PairLexicon induce_dictionary(const Matrix& mapped_src, const Matrix& tgt,
                              const CslsDensities& densities, const NeighborList& forward,
                              const InduceOptions& options) {
  const auto n_src = static_cast<std::size_t>(mapped_src.rows());
  const auto n_tgt = static_cast<std::size_t>(tgt.rows());
  if (options.rank_max == 0) throw ShapeError("induce: rank_max must be positive");
  if (options.warn_on_clamp &&
      (options.rank_max > n_src ||
       (options.filter == RankFilter::Both && options.rank_max > n_tgt))) {
    warn("induce: rank_max " + std::to_string(options.rank_max) +
         " exceeds a vocabulary size; clamping");
  }
  const std::size_t n_queries = std::min(options.rank_max, n_src);
  if (forward.k != 1 || forward.queries() < n_queries) {
    throw ShapeError("induce: forward ranking must be top-1 over the leading source rows");
  }

  PairLexicon out{options.src_id, options.tgt_id, {}, true};
  std::vector<IndexPair> candidates;
  candidates.reserve(n_queries);
  for (std::size_t i = 0; i < n_queries; ++i) {
    const std::size_t j = forward.indices[i];
    if (options.filter == RankFilter::Both && j >= options.rank_max) continue;
    candidates.push_back({i, j});
  }

  if (!options.mutual) {
    out.pairs = std::move(candidates);
    return out;
  }

  std::set<std::size_t> targets;
  for (const auto& c : candidates) targets.insert(c.tgt);
  const std::vector<std::size_t> target_rows(targets.begin(), targets.end());
  const auto backward = csls_rank(tgt, mapped_src, densities.tgt, densities.src, target_rows, 1);
  std::vector<std::size_t> best_source(n_tgt, n_src);
  for (std::size_t t = 0; t < target_rows.size(); ++t) best_source[target_rows[t]] = backward.indices[t];

  for (const auto& c : candidates) {
    if (best_source[c.tgt] == c.src) out.pairs.push_back(c);
  }
  return out;
}

TranslationResult translate_topk(std::span<const std::string> words, const EmbeddingSpace& src,
                                 const EmbeddingSpace& tgt, const OrthogonalMap& map,
                                 std::size_t k, Metric metric, std::size_t k_density) {
  TranslationResult out;
  std::vector<std::size_t> rows;
  for (const auto& w : words) {
    if (auto i = src.lookup(w)) {
      rows.push_back(*i);
      out.scored.push_back({w, *i, {}, {}});
    } else {
      out.oov.push_back(w);
    }
  }
  if (rows.empty()) return out;

  const Matrix mapped = map.apply(src.vectors());
  const auto ranked = rank_rows(mapped, tgt.vectors(), rows, k, metric, k_density);
  for (std::size_t q = 0; q < rows.size(); ++q) {
    const auto idx = ranked.indices_of(q);
    const auto sc = ranked.scores_of(q);
    out.scored[q].targets.assign(idx.begin(), idx.end());
    out.scored[q].scores.assign(sc.begin(), sc.end());
  }
  return out;
}

}  // namespace procalign
