// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "procalign/log.hpp"
#include "procalign/simd/kernels.hpp"

namespace procalign {
namespace {

std::span<const double> row_of(const Matrix& m, std::size_t r) {
  return {m.data() + r * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(simd::dot(a, a));
  const double nb = std::sqrt(simd::dot(b, b));
  return simd::dot(a, b) / (na * nb);
}

std::size_t clamp_validation_top(std::size_t top_n, std::size_t n_src) {
  if (top_n > n_src) {
    warn("validation: top " + std::to_string(top_n) + " exceeds source vocabulary; clamping");
    return n_src;
  }
  return top_n;
}

NeighborList leading_top1(const Matrix& mapped, const Matrix& tgt, const CslsDensities& densities,
                          std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return csls_rank(mapped, tgt, densities.src, densities.tgt, rows, 1);
}

// `best` ranks at least the top_n leading source rows; top_n must already be
// clamped to the source vocabulary.
double validation_from(const Matrix& mapped, const Matrix& tgt, const NeighborList& best,
                       std::size_t top_n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < top_n; ++i) sum += cosine(row_of(mapped, i), row_of(tgt, best.indices[i]));
  return sum / static_cast<double>(top_n);
}

void check_indices(const PairLexicon& lex, const EmbeddingSpace& a, const EmbeddingSpace& b) {
  for (const auto& p : lex.pairs) {
    if (p.src >= a.size() || p.tgt >= b.size()) throw ShapeError("seed lexicon index out of range");
  }
}

struct Epoch {
  std::vector<OrthogonalMap> transforms;
  OrthogonalMap composed;
  double objective;
};

Epoch solve_pairs(const SpaceSet& spaces, const PairLexicon& lex, Mode solver,
                  const TrainConfig& config, const std::vector<OrthogonalMap>& warm) {
  const auto src_idx = lex.src_indices();
  const auto tgt_idx = lex.tgt_indices();
  const Matrix e = gather_rows(spaces.pivot, src_idx);
  const Matrix f = gather_rows(spaces.target, tgt_idx);
  if (solver == Mode::Pa) {
    OrthogonalMap t = procrustes_solve(e, f);
    const double objective = (e * t.matrix() - f).squaredNorm();
    return {{t, OrthogonalMap::identity(spaces.pivot.dim())}, t, objective};
  }
  const std::array<Matrix, 2> blocks{e, f};
  GpaOptions options;
  options.inner_iters = config.inner_iters;
  options.rng_seed = config.rng_seed;
  if (warm.size() >= 2) options.warm_start = {warm[0], warm[1]};
  GpaState state = gpa_solve(blocks, options);
  OrthogonalMap composed = compose_to_target(state.transforms[0], state.transforms[1]);
  return {std::move(state.transforms), std::move(composed), state.objective_trace.back()};
}

Epoch solve_triples(const SpaceSet& spaces, const TripleLexicon& lex, const TrainConfig& config,
                    const std::vector<OrthogonalMap>& warm) {
  std::vector<std::size_t> p, t, s;
  for (const auto& x : lex.triples) {
    p.push_back(x.pivot);
    t.push_back(x.l2);
    s.push_back(x.l3);
  }
  const std::array<Matrix, 3> blocks{gather_rows(spaces.pivot, p), gather_rows(spaces.target, t),
                                     gather_rows(*spaces.support, s)};
  GpaOptions options;
  options.inner_iters = config.inner_iters;
  options.rng_seed = config.rng_seed;
  if (warm.size() == 3) options.warm_start = warm;
  GpaState state = gpa_solve(blocks, options);
  OrthogonalMap composed = compose_to_target(state.transforms[0], state.transforms[1]);
  return {std::move(state.transforms), std::move(composed), state.objective_trace.back()};
}

InduceOptions induce_options(const TrainConfig& config, const EmbeddingSpace& a,
                             const EmbeddingSpace& b) {
  InduceOptions o;
  o.rank_max = config.rank_max;
  o.mutual = config.mutual;
  o.k_density = config.csls_k_density;
  o.filter = config.rank_filter;
  o.src_id = a.lang();
  o.tgt_id = b.lang();
  o.warn_on_clamp = false;
  return o;
}

template <typename Lexicon>
void merge_seed(Lexicon& induced, const Lexicon& seed) {
  if constexpr (std::is_same_v<Lexicon, PairLexicon>) {
    induced.pairs.insert(induced.pairs.end(), seed.pairs.begin(), seed.pairs.end());
    deduplicate(induced);
  } else {
    std::set<IndexTriple> seen;
    std::vector<IndexTriple> merged;
    const std::array<const std::vector<IndexTriple>*, 2> lists{&induced.triples, &seed.triples};
    for (const auto* list : lists) {
      for (const auto& t : *list) {
        if (seen.insert(t).second) merged.push_back(t);
      }
    }
    induced.triples = std::move(merged);
  }
}

std::size_t lexicon_size(const SeedLexicon& lex) {
  return std::visit([](const auto& l) { return l.size(); }, lex);
}

void check_seed(const SpaceSet& spaces, const SeedLexicon& seed, Mode solver) {
  if (const auto* pairs = std::get_if<PairLexicon>(&seed)) {
    if (solver == Mode::Mgpa) throw ShapeError("three-way training needs a triple lexicon");
    if (pairs->src_id != spaces.pivot.lang() || pairs->tgt_id != spaces.target.lang()) {
      throw ShapeError("seed lexicon is for '" + pairs->src_id + "'→'" + pairs->tgt_id +
                       "', spaces are '" + spaces.pivot.lang() + "'→'" + spaces.target.lang() +
                       "'");
    }
    check_indices(*pairs, spaces.pivot, spaces.target);
    return;
  }
  const auto& triples = std::get<TripleLexicon>(seed);
  if (solver != Mode::Mgpa) throw ShapeError("two-way training needs a pair lexicon");
  if (spaces.support == nullptr) throw ShapeError("three-way training needs a support space");
  if (triples.pivot_id != spaces.pivot.lang() || triples.l2_id != spaces.target.lang() ||
      triples.l3_id != spaces.support->lang()) {
    throw ShapeError("triple lexicon space ids do not match the spaces");
  }
  for (const auto& t : triples.triples) {
    if (t.pivot >= spaces.pivot.size() || t.l2 >= spaces.target.size() ||
        t.l3 >= spaces.support->size()) {
      throw ShapeError("seed lexicon index out of range");
    }
  }
}

}  // namespace

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Pa:
      return "pa";
    case Mode::Gpa:
      return "gpa";
    case Mode::Mgpa:
      return "mgpa";
    case Mode::MgpaPlus:
      return "mgpa+";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : {Mode::Pa, Mode::Gpa, Mode::Mgpa, Mode::MgpaPlus}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view stop_reason_name(StopReason reason) {
  return reason == StopReason::Patience ? "patience" : "epoch-budget";
}

void TrainConfig::validate() const {
  const std::pair<const char*, std::size_t> counts[] = {
      {"inner_iters", inner_iters},     {"rank_max", rank_max},
      {"csls_k_density", csls_k_density}, {"validation_top", validation_top},
      {"mgpa_epochs", mgpa_epochs},     {"finetune_epochs", finetune_epochs},
      {"max_epochs", max_epochs}};
  for (const auto& [name, value] : counts) {
    if (value == 0) throw ShapeError(std::string("config: ") + name + " must be positive");
  }
}

double validation_metric(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         const OrthogonalMap& composed, std::size_t top_n, std::size_t k_density) {
  const Matrix mapped = composed.apply(src.vectors());
  const auto densities = csls_densities(mapped, tgt.vectors(), k_density);
  top_n = clamp_validation_top(top_n, src.size());
  return validation_from(mapped, tgt.vectors(), leading_top1(mapped, tgt.vectors(), densities, top_n),
                         top_n);
}

LoopResult bootstrap_loop(const SpaceSet& spaces, const SeedLexicon& seed,
                          const TrainConfig& config, const LoopSpec& spec,
                          const EpochObserver& observer) {
  config.validate();
  if (spec.solver == Mode::MgpaPlus) throw ShapeError("bootstrap_loop: MGPA+ is two phases");
  if (spec.epoch_budget == 0) throw ShapeError("bootstrap_loop: empty epoch budget");
  if (spaces.pivot.dim() != spaces.target.dim() ||
      (spaces.support && spaces.support->dim() != spaces.pivot.dim())) {
    throw ShapeError("all spaces must share one dimension");
  }
  check_seed(spaces, seed, spec.solver);
  if (lexicon_size(seed) == 0) throw EmptyLexiconError("empty seed lexicon");

  const std::size_t validation_top =
      clamp_validation_top(config.validation_top, spaces.pivot.size());
  {
    std::size_t largest = std::max(spaces.pivot.size(), spaces.target.size());
    if (spaces.support) largest = std::max(largest, spaces.support->size());
    if (config.rank_max > largest) {
      warn("rank_max " + std::to_string(config.rank_max) + " exceeds every vocabulary size");
    }
  }

  SeedLexicon lexicon = seed;
  std::vector<OrthogonalMap> transforms = spec.warm_start;
  std::optional<TrainResult> best;
  double best_validation = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  StopReason stop = StopReason::EpochBudget;
  TrainReport report;

  for (std::size_t n = 0; n < spec.epoch_budget; ++n) {
    const std::size_t epoch = spec.first_epoch + n;
    EpochRecord record;
    record.epoch = epoch;
    record.phase = spec.phase;
    record.train_size = lexicon_size(lexicon);

    Epoch solved = std::holds_alternative<PairLexicon>(lexicon)
                       ? solve_pairs(spaces, std::get<PairLexicon>(lexicon), spec.solver, config,
                                     transforms)
                       : solve_triples(spaces, std::get<TripleLexicon>(lexicon), config, transforms);
    transforms = solved.transforms;
    record.objective = solved.objective;

    const Matrix mapped = solved.composed.apply(spaces.pivot.vectors());
    const auto densities = csls_densities(mapped, spaces.target.vectors(), config.csls_k_density);
    const NeighborList forward =
        leading_top1(mapped, spaces.target.vectors(), densities,
                     std::max(validation_top, std::min(config.rank_max, spaces.pivot.size())));
    record.validation = validation_from(mapped, spaces.target.vectors(), forward, validation_top);

    PairLexicon induced =
        induce_dictionary(mapped, spaces.target.vectors(), densities, forward,
                          induce_options(config, spaces.pivot, spaces.target));
    if (std::holds_alternative<PairLexicon>(lexicon)) {
      if (config.union_seed) merge_seed(induced, std::get<PairLexicon>(seed));
      lexicon = std::move(induced);
    } else {
      const OrthogonalMap to_support = compose_to_target(transforms[0], transforms[2]);
      const Matrix mapped_s = to_support.apply(spaces.pivot.vectors());
      const PairLexicon support_pairs =
          induce_dictionary(mapped_s, spaces.support->vectors(),
                            induce_options(config, spaces.pivot, *spaces.support));
      TripleLexicon triples = triangulate(induced, support_pairs);
      if (config.union_seed) merge_seed(triples, std::get<TripleLexicon>(seed));
      lexicon = std::move(triples);
    }
    record.induced_size = lexicon_size(lexicon);
    report.epochs.push_back(record);
    if (observer) observer(record, transforms, solved.composed);

    if (record.induced_size == 0) {
      throw EmptyLexiconError("induced lexicon is empty at epoch " + std::to_string(epoch));
    }

    if (record.validation > best_validation) {
      best_validation = record.validation;
      best = TrainResult{transforms, solved.composed, {}};
      report.best_epoch = epoch;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (spec.early_stopping && since_best >= config.patience) {
      stop = n + 1 < spec.epoch_budget ? StopReason::Patience : StopReason::EpochBudget;
      break;
    }
  }

  report.stop_reason = stop;
  best->report = std::move(report);
  return {std::move(*best), std::move(transforms), std::move(lexicon)};
}

TrainResult run_bootstrap(const SpaceSet& spaces, const SeedLexicon& seed,
                          const TrainConfig& config, const EpochObserver& observer) {
  LoopSpec spec;
  switch (config.mode) {
    case Mode::Pa:
    case Mode::Gpa:
      spec.solver = config.mode;
      spec.epoch_budget = config.max_epochs;
      spec.early_stopping = true;
      break;
    case Mode::Mgpa:
      spec.solver = Mode::Mgpa;
      spec.epoch_budget = config.mgpa_epochs;
      spec.early_stopping = false;
      break;
    case Mode::MgpaPlus:
      if (const auto* triples = std::get_if<TripleLexicon>(&seed)) {
        return run_mgpa_plus(spaces, *triples, config, observer);
      }
      throw ShapeError("three-way training needs a triple lexicon");
  }
  return bootstrap_loop(spaces, seed, config, spec, observer).best;
}

TrainResult run_mgpa_plus(const SpaceSet& spaces, const TripleLexicon& seed,
                          const TrainConfig& config, const EpochObserver& observer) {
  LoopSpec three_way;
  three_way.solver = Mode::Mgpa;
  three_way.epoch_budget = config.mgpa_epochs;
  three_way.early_stopping = false;
  LoopResult phase1 = bootstrap_loop(spaces, seed, config, three_way, observer);

  LoopSpec two_way;
  two_way.solver = Mode::Gpa;
  two_way.epoch_budget = config.finetune_epochs;
  two_way.early_stopping = false;
  two_way.warm_start = {phase1.last_transforms[0], phase1.last_transforms[1]};
  two_way.first_epoch = config.mgpa_epochs + 1;
  two_way.phase = 2;
  const PairLexicon projected = project_pivot_l2(std::get<TripleLexicon>(phase1.last_lexicon));
  LoopResult phase2 = bootstrap_loop(spaces, projected, config, two_way, observer);

  TrainReport report;
  report.epochs = phase1.best.report.epochs;
  report.epochs.insert(report.epochs.end(), phase2.best.report.epochs.begin(),
                       phase2.best.report.epochs.end());
  report.phase_boundary = config.mgpa_epochs;
  report.stop_reason = StopReason::EpochBudget;

  // Best over the concatenated trace; ties go to the earlier epoch.
  const bool phase2_wins =
      phase2.best.report.best().validation > phase1.best.report.best().validation;
  TrainResult result = phase2_wins ? std::move(phase2.best) : std::move(phase1.best);
  report.best_epoch = result.report.best_epoch;
  result.report = std::move(report);
  return result;
}

}  // namespace procalign
