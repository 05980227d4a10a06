// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "procalign/common.hpp"

namespace procalign {

// Convention used throughout: word vectors are rows, transforms act on the
// right. A map T sends a row-stacked block X to X * T.

/// Largest absolute entry of TᵀT − I.
double orthogonality_error(const Matrix& t);

/// A d×d orthogonal matrix applied on the right. Construction checks the
/// orthogonality invariant to kTolerance. Reflections (det = −1) are allowed.
class OrthogonalMap {
 public:
  static constexpr double kTolerance = 1e-6;

  explicit OrthogonalMap(Matrix t);
  static OrthogonalMap identity(std::size_t dim);

  const Matrix& matrix() const { return t_; }
  std::size_t dim() const { return static_cast<std::size_t>(t_.rows()); }
  double orthogonality_error() const { return procalign::orthogonality_error(t_); }

  Matrix apply(const Matrix& rows) const;
  OrthogonalMap transpose() const;

  friend bool operator==(const OrthogonalMap& a, const OrthogonalMap& b) { return a.t_ == b.t_; }

 private:
  Matrix t_;
};

struct SvdResult {
  Matrix u;
  Vector s;  // non-negative, descending
  Matrix v;
};

/// M = U · diag(S) · Vᵀ for a square M, via one-sided Jacobi rotations.
/// U and V are fully orthogonal even when M is rank deficient.
/// Throws ShapeError on non-square or non-finite input, ConvergenceError if
/// the sweeps do not settle.
SvdResult svd_square(const Matrix& m);

/// argmin over orthogonal T of ‖E·T − F‖²_F: with FᵀE = UΣVᵀ, T = V·Uᵀ.
OrthogonalMap procrustes_solve(const Matrix& e, const Matrix& f);

/// Σ_{i<j} ‖E_i·T_i − E_j·T_j‖²_F
double gpa_objective(std::span<const Matrix> spaces, std::span<const OrthogonalMap> transforms);

/// The latent mean G = (1/k) Σ_i E_i·T_i.
Matrix gpa_latent(std::span<const Matrix> spaces, std::span<const OrthogonalMap> transforms);

struct GpaOptions {
  std::size_t inner_iters = 100;
  // Which space seeds G on a cold start. Drawn from rng_seed when absent.
  std::optional<std::size_t> init_index;
  std::uint64_t rng_seed = 0;
  // Stop early once a round improves the objective by less than this
  // fraction. Zero disables the cutoff.
  double rel_tol = 1e-9;
  // When non-empty, G starts as the mean of E_i·T_i under these maps instead
  // of a single space.
  std::vector<OrthogonalMap> warm_start;
};

struct GpaState {
  std::vector<OrthogonalMap> transforms;
  Matrix latent;
  std::vector<double> objective_trace;  // one value per completed round
  std::optional<std::size_t> init_index;  // empty on warm starts
};

/// Generalized Procrustes: alternates T_i ← procrustes(E_i, G) for every i
/// and G ← mean_i E_i·T_i.
GpaState gpa_solve(std::span<const Matrix> spaces, const GpaOptions& options = {});

/// T_src · T_tgtᵀ: maps source rows straight into the target space.
OrthogonalMap compose_to_target(const OrthogonalMap& t_src, const OrthogonalMap& t_tgt);

// Transform files: header "d d", then d rows of d numbers, 9 significant digits.
void write_transform(std::ostream& out, const Matrix& t);
void write_transform(const std::filesystem::path& path, const Matrix& t);
OrthogonalMap read_transform(std::istream& in);
OrthogonalMap read_transform(const std::filesystem::path& path);

}  // namespace procalign
