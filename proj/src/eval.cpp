// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/eval.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>
#include <set>

namespace procalign {

EvalResult precision_at_k(const PairLexicon& test, const CandidateTable& candidates,
                          std::span<const std::size_t> ks, std::size_t skipped) {
  if (ks.empty()) throw ShapeError("precision_at_k: no k values");
  const std::size_t k_max = *std::max_element(ks.begin(), ks.end());
  if (*std::min_element(ks.begin(), ks.end()) == 0) throw ShapeError("precision_at_k: k must be positive");

  std::map<std::size_t, std::set<std::size_t>> gold;
  for (const auto& p : test.pairs) gold[p.src].insert(p.tgt);
  if (gold.empty()) throw EmptyLexiconError("precision_at_k: no evaluable source words");

  std::map<std::size_t, std::size_t> correct;
  for (const auto& [src, targets] : gold) {
    auto it = candidates.find(src);
    if (it == candidates.end()) throw ShapeError("precision_at_k: no candidates for a test word");
    const auto& ranked = it->second;
    if (ranked.size() < k_max) {
      throw ShapeError("precision_at_k: fewer candidates than the largest k");
    }
    // Rank of the first gold hit, or k_max when absent.
    std::size_t hit = k_max;
    for (std::size_t r = 0; r < k_max; ++r) {
      if (targets.contains(ranked[r])) {
        hit = r;
        break;
      }
    }
    for (std::size_t k : ks) {
      if (hit < k) ++correct[k];
    }
  }

  EvalResult result;
  result.evaluated = gold.size();
  result.skipped = skipped;
  for (std::size_t k : ks) {
    result.p_at[k] = 100.0 * static_cast<double>(correct[k]) / static_cast<double>(gold.size());
  }
  return result;
}

EvalResult evaluate_map(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                        const OrthogonalMap& map, const DictionaryParse& test,
                        const EvalOptions& options) {
  if (options.ks.empty()) throw ShapeError("evaluate: no k values");
  const std::size_t k_max =
      std::min(*std::max_element(options.ks.begin(), options.ks.end()), tgt.size());
  std::set<std::size_t> sources;
  for (const auto& p : test.lexicon.pairs) sources.insert(p.src);
  const std::vector<std::size_t> rows(sources.begin(), sources.end());

  const Matrix mapped = map.apply(src.vectors());
  const auto ranked = rank_rows(mapped, tgt.vectors(), rows, k_max, options.metric, options.k_density);
  CandidateTable table;
  for (std::size_t q = 0; q < rows.size(); ++q) {
    const auto idx = ranked.indices_of(q);
    table.emplace(rows[q], std::vector<std::size_t>(idx.begin(), idx.end()));
  }
  std::vector<std::size_t> ks;
  for (std::size_t k : options.ks) ks.push_back(std::min(k, k_max));
  EvalResult clamped = precision_at_k(test.lexicon, table, ks,
                                      test.total_source_types - test.kept_source_types);
  // Report under the requested k even when the vocabulary forced a clamp.
  EvalResult result;
  result.evaluated = clamped.evaluated;
  result.skipped = clamped.skipped;
  for (std::size_t i = 0; i < options.ks.size(); ++i) result.p_at[options.ks[i]] = clamped.p_at[ks[i]];
  return result;
}

EvalResult procrustes_fit(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                          const DictionaryParse& test, Mode mode, const TrainConfig& config,
                          const EvalOptions& options) {
  if (mode != Mode::Pa && mode != Mode::Gpa) throw ShapeError("procrustes_fit: mode must be pa or gpa");
  if (test.lexicon.empty()) throw EmptyLexiconError("procrustes_fit: empty test dictionary");
  const auto src_idx = test.lexicon.src_indices();
  const auto tgt_idx = test.lexicon.tgt_indices();
  const Matrix e = gather_rows(src, src_idx);
  const Matrix f = gather_rows(tgt, tgt_idx);

  if (mode == Mode::Pa) return evaluate_map(src, tgt, procrustes_solve(e, f), test, options);

  const std::array<Matrix, 2> blocks{e, f};
  GpaOptions gpa;
  gpa.inner_iters = config.inner_iters;
  gpa.rng_seed = config.rng_seed;
  const GpaState state = gpa_solve(blocks, gpa);
  return evaluate_map(src, tgt, compose_to_target(state.transforms[0], state.transforms[1]), test,
                      options);
}

void print_eval(std::ostream& out, const EvalResult& result, Metric metric) {
  char buf[128];
  out << "retrieval: " << metric_name(metric) << "\n";
  std::snprintf(buf, sizeof(buf), "evaluated %zu source words, skipped %zu (coverage %.2f%%)\n",
                result.evaluated, result.skipped, 100.0 * result.coverage());
  out << buf;
  for (const auto& [k, value] : result.p_at) {
    std::snprintf(buf, sizeof(buf), "  P@%-4zu %6.2f\n", k, value);
    out << buf;
  }
  for (const auto& [k, value] : result.p_at) {
    std::snprintf(buf, sizeof(buf), "precision\t%zu\t%.2f\t%.4f\n", k, value, result.coverage());
    out << buf;
  }
}

}  // namespace procalign
