// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/solver.hpp"

#include <limits>
#include <random>
#include <string>

#include "procalign/log.hpp"

namespace procalign {
namespace {

void check_same_shape(std::span<const Matrix> spaces) {
  for (const auto& e : spaces) {
    if (e.rows() != spaces.front().rows() || e.cols() != spaces.front().cols()) {
      throw ShapeError("GPA: all spaces must share one shape");
    }
  }
}

void check_transforms(std::span<const Matrix> spaces, std::span<const OrthogonalMap> transforms) {
  if (spaces.size() != transforms.size()) {
    throw ShapeError("GPA: " + std::to_string(spaces.size()) + " spaces but " +
                     std::to_string(transforms.size()) + " transforms");
  }
  check_same_shape(spaces);
  for (const auto& t : transforms) {
    if (static_cast<Eigen::Index>(t.dim()) != spaces.front().cols()) {
      throw ShapeError("GPA: transform dimension does not match the spaces");
    }
  }
}

}  // namespace

double orthogonality_error(const Matrix& t) {
  if (t.rows() != t.cols()) return std::numeric_limits<double>::infinity();
  return (t.transpose() * t - Matrix::Identity(t.rows(), t.cols())).cwiseAbs().maxCoeff();
}

OrthogonalMap::OrthogonalMap(Matrix t) : t_(std::move(t)) {
  if (t_.rows() != t_.cols() || t_.rows() == 0) throw ShapeError("orthogonal map must be square");
  const double err = procalign::orthogonality_error(t_);
  if (!(err <= kTolerance)) {
    throw ShapeError("matrix is not orthogonal (max |TᵀT − I| = " + std::to_string(err) + ")");
  }
}

OrthogonalMap OrthogonalMap::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return OrthogonalMap(Matrix::Identity(d, d));
}

Matrix OrthogonalMap::apply(const Matrix& rows) const {
  if (rows.cols() != t_.rows()) throw ShapeError("apply: dimension mismatch");
  return rows * t_;
}

OrthogonalMap OrthogonalMap::transpose() const { return OrthogonalMap(t_.transpose()); }

OrthogonalMap procrustes_solve(const Matrix& e, const Matrix& f) {
  if (e.rows() != f.rows() || e.cols() != f.cols()) {
    throw ShapeError("procrustes: E is " + std::to_string(e.rows()) + "x" +
                     std::to_string(e.cols()) + ", F is " + std::to_string(f.rows()) + "x" +
                     std::to_string(f.cols()));
  }
  if (e.rows() < 1 || e.cols() < 1) throw ShapeError("procrustes: empty input");
  if (e.rows() < e.cols()) {
    warn("procrustes: " + std::to_string(e.rows()) + " pairs in dimension " +
         std::to_string(e.cols()) + "; the map is underdetermined");
  }
  const Matrix cross = f.transpose() * e;
  const SvdResult svd = svd_square(cross);
  return OrthogonalMap(svd.v * svd.u.transpose());
}

double gpa_objective(std::span<const Matrix> spaces, std::span<const OrthogonalMap> transforms) {
  check_transforms(spaces, transforms);
  std::vector<Matrix> mapped;
  mapped.reserve(spaces.size());
  for (std::size_t i = 0; i < spaces.size(); ++i) mapped.push_back(spaces[i] * transforms[i].matrix());
  double total = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    for (std::size_t j = i + 1; j < mapped.size(); ++j) {
      total += (mapped[i] - mapped[j]).squaredNorm();
    }
  }
  return total;
}

Matrix gpa_latent(std::span<const Matrix> spaces, std::span<const OrthogonalMap> transforms) {
  check_transforms(spaces, transforms);
  Matrix g = Matrix::Zero(spaces.front().rows(), spaces.front().cols());
  for (std::size_t i = 0; i < spaces.size(); ++i) g.noalias() += spaces[i] * transforms[i].matrix();
  return g / static_cast<double>(spaces.size());
}

GpaState gpa_solve(std::span<const Matrix> spaces, const GpaOptions& options) {
  const std::size_t k = spaces.size();
  if (k < 2) throw ShapeError("GPA needs at least two spaces");
  check_same_shape(spaces);
  if (options.inner_iters < 1) throw ShapeError("GPA: inner_iters must be positive");
  const auto d = static_cast<std::size_t>(spaces.front().cols());

  GpaState state;
  if (!options.warm_start.empty()) {
    check_transforms(spaces, options.warm_start);
    state.transforms = options.warm_start;
    state.latent = gpa_latent(spaces, state.transforms);
  } else {
    std::size_t init = 0;
    if (options.init_index) {
      init = *options.init_index;
      if (init >= k) throw ShapeError("GPA: init_index out of range");
    } else {
      std::mt19937_64 rng(options.rng_seed);
      init = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
    }
    state.init_index = init;
    state.transforms.assign(k, OrthogonalMap::identity(d));
    state.latent = spaces[init];
  }

  for (std::size_t round = 0; round < options.inner_iters; ++round) {
    // Each T_i depends only on the previous G; G is recomputed afterwards.
    for (std::size_t i = 0; i < k; ++i) state.transforms[i] = procrustes_solve(spaces[i], state.latent);
    state.latent = gpa_latent(spaces, state.transforms);
    const double objective = gpa_objective(spaces, state.transforms);
    state.objective_trace.push_back(objective);

    if (options.rel_tol > 0.0 && state.objective_trace.size() >= 2) {
      const double prev = state.objective_trace[state.objective_trace.size() - 2];
      if (prev - objective <= options.rel_tol * prev) break;
    }
    if (objective == 0.0) break;
  }
  return state;
}

OrthogonalMap compose_to_target(const OrthogonalMap& t_src, const OrthogonalMap& t_tgt) {
  if (t_src.dim() != t_tgt.dim()) throw ShapeError("compose_to_target: dimension mismatch");
  return OrthogonalMap(t_src.matrix() * t_tgt.matrix().transpose());
}

}  // namespace procalign
