// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "procalign/lexicon.hpp"
#include "procalign/retrieval.hpp"
#include "procalign/trainer.hpp"

namespace procalign {

struct EvalResult {
  std::map<std::size_t, double> p_at;  // k -> precision in [0, 100]
  std::size_t evaluated = 0;           // source types scored
  std::size_t skipped = 0;             // source types with no in-vocabulary pair
  double coverage() const {
    const std::size_t total = evaluated + skipped;
    return total == 0 ? 0.0 : static_cast<double>(evaluated) / static_cast<double>(total);
  }
};

/// Ranked target candidates per source index.
using CandidateTable = std::unordered_map<std::size_t, std::vector<std::size_t>>;

/// A source type is correct at k when any of its gold targets is among its
/// first k candidates. Precision is over unique source types.
EvalResult precision_at_k(const PairLexicon& test, const CandidateTable& candidates,
                          std::span<const std::size_t> ks, std::size_t skipped = 0);

struct EvalOptions {
  std::vector<std::size_t> ks{1, 10};
  Metric metric = Metric::Csls;
  std::size_t k_density = 10;
};

/// Retrieves candidates for every test source word through `map` and scores
/// them.
EvalResult evaluate_map(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                        const OrthogonalMap& map, const DictionaryParse& test,
                        const EvalOptions& options = {});

/// Fits a single PA or GPA solve on the test dictionary itself and scores
/// the result on the same dictionary.
EvalResult procrustes_fit(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                          const DictionaryParse& test, Mode mode, const TrainConfig& config = {},
                          const EvalOptions& options = {});

/// Human-readable table followed by "metric<TAB>k<TAB>value<TAB>coverage"
/// lines. Values carry two decimals.
void print_eval(std::ostream& out, const EvalResult& result, Metric metric);

}  // namespace procalign
