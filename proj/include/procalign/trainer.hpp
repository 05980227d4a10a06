// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "procalign/embedspace.hpp"
#include "procalign/lexicon.hpp"
#include "procalign/retrieval.hpp"
#include "procalign/solver.hpp"

namespace procalign {

enum class Mode { Pa, Gpa, Mgpa, MgpaPlus };

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct TrainConfig {
  Mode mode = Mode::Gpa;
  std::size_t patience = 5;
  std::size_t inner_iters = 100;
  std::size_t rank_max = 15000;
  std::size_t csls_k_density = 10;
  std::size_t validation_top = 10000;
  std::size_t mgpa_epochs = 10;
  std::size_t finetune_epochs = 5;
  std::size_t max_epochs = 100;  // budget for PA/GPA with early stopping
  std::uint64_t rng_seed = 0;
  bool mutual = true;
  bool union_seed = false;  // keep the seed pairs in every induced lexicon
  RankFilter rank_filter = RankFilter::Both;

  /// Throws ShapeError on a zero count (patience may be zero).
  void validate() const;
};

enum class StopReason { Patience, EpochBudget };
std::string_view stop_reason_name(StopReason reason);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based, continuous across phases
  std::size_t phase = 1;
  std::size_t train_size = 0;    // lexicon the solve was fit on
  std::size_t induced_size = 0;  // lexicon induced from the new alignment
  double validation = 0.0;
  double objective = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  StopReason stop_reason = StopReason::EpochBudget;
  std::optional<std::size_t> phase_boundary;  // last epoch of the three-way phase
  bool gpa_warm_start = true;  // GPA resumes from the previous epoch's maps

  const EpochRecord& best() const {
    for (const auto& e : epochs) {
      if (e.epoch == best_epoch) return e;
    }
    throw std::out_of_range("TrainReport: no record for the best epoch");
  }
};

/// Pivot first. The support space is only used by the three-way modes.
struct SpaceSet {
  const EmbeddingSpace& pivot;
  const EmbeddingSpace& target;
  const EmbeddingSpace* support = nullptr;
};

using SeedLexicon = std::variant<PairLexicon, TripleLexicon>;

struct TrainResult {
  // One map per space (pivot, target[, support]) from the best epoch. For PA
  // the target map is the identity.
  std::vector<OrthogonalMap> transforms;
  OrthogonalMap composed;  // pivot → target
  TrainReport report;
};

using EpochObserver = std::function<void(const EpochRecord&, std::span<const OrthogonalMap>,
                                         const OrthogonalMap& composed)>;

/// Mean cosine between each of the top_n most frequent source words, mapped
/// with `composed`, and its CSLS top-1 target.
double validation_metric(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         const OrthogonalMap& composed, std::size_t top_n,
                         std::size_t k_density = 10);

/// Solve → induce → validate epochs with early stopping (PA, GPA) or a fixed
/// mgpa_epochs budget (MGPA). Returns the maps of the best validation epoch.
TrainResult run_bootstrap(const SpaceSet& spaces, const SeedLexicon& seed,
                          const TrainConfig& config, const EpochObserver& observer = {});

/// Three-way MGPA for mgpa_epochs, then finetune_epochs of two-way GPA on
/// the projected pivot–target lexicon, warm-started from the phase-1 maps.
TrainResult run_mgpa_plus(const SpaceSet& spaces, const TripleLexicon& seed,
                          const TrainConfig& config, const EpochObserver& observer = {});

/// Lower-level loop used by both entry points.
struct LoopSpec {
  Mode solver = Mode::Gpa;  // Pa, Gpa (two-way) or Mgpa (three-way)
  std::size_t epoch_budget = 1;
  bool early_stopping = true;
  std::vector<OrthogonalMap> warm_start;
  std::size_t first_epoch = 1;
  std::size_t phase = 1;
};

struct LoopResult {
  TrainResult best;
  std::vector<OrthogonalMap> last_transforms;
  SeedLexicon last_lexicon;  // induced in the final epoch
};

LoopResult bootstrap_loop(const SpaceSet& spaces, const SeedLexicon& seed,
                          const TrainConfig& config, const LoopSpec& spec,
                          const EpochObserver& observer = {});

}  // namespace procalign
