// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "procalign/solver.hpp"

namespace procalign {
namespace {

constexpr int kMaxSweeps = 80;
// Columns this small relative to the largest singular value get a
// synthesized left singular vector.
constexpr double kRankTol = 1e-14;

using ColMatrix = Eigen::MatrixXd;

// Rotates columns p and q of `a` (and of `v`) so that they become orthogonal.
// Returns false when the pair is already orthogonal to tolerance.
// Columns with squared norm at or below `negligible` are rounding noise and
// are left alone; rotating them against each other never settles.
bool rotate_pair(ColMatrix& a, ColMatrix& v, Eigen::Index p, Eigen::Index q, double tol,
                 double negligible) {
  const double alpha = a.col(p).squaredNorm();
  const double beta = a.col(q).squaredNorm();
  if (alpha <= negligible || beta <= negligible) return false;
  const double gamma = a.col(p).dot(a.col(q));
  if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) return false;

  const double zeta = (beta - alpha) / (2.0 * gamma);
  const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = c * t;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const double ap = a(r, p);
    const double aq = a(r, q);
    a(r, p) = c * ap - s * aq;
    a(r, q) = s * ap + c * aq;
  }
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    const double vp = v(r, p);
    const double vq = v(r, q);
    v(r, p) = c * vp - s * vq;
    v(r, q) = s * vp + c * vq;
  }
  return true;
}

// Fills column j of u with a unit vector orthogonal to the columns listed in
// `basis`, picking the coordinate axis with the largest residual.
void complete_column(ColMatrix& u, Eigen::Index j, const std::vector<Eigen::Index>& basis) {
  const Eigen::Index d = u.rows();
  Eigen::VectorXd best;
  double best_norm = -1.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd x = Eigen::VectorXd::Unit(d, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index b : basis) x -= u.col(b).dot(x) * u.col(b);
    }
    const double n = x.norm();
    if (n > best_norm) {
      best_norm = n;
      best = std::move(x);
    }
  }
  u.col(j) = best / best_norm;
}

}  // namespace

SvdResult svd_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ShapeError("svd_square: matrix must be square");
  if (!m.allFinite()) throw ShapeError("svd_square: non-finite entry");
  const Eigen::Index d = m.rows();

  ColMatrix a = m;
  ColMatrix v = ColMatrix::Identity(d, d);
  // Pairs count as orthogonal once their cosine is within rounding noise of
  // a length-d dot product.
  const double tol = static_cast<double>(d) * std::numeric_limits<double>::epsilon();
  const double noise = tol * m.norm();
  const double negligible = noise * noise;
  int sweep = 0;
  for (bool rotated = true; rotated; ++sweep) {
    if (sweep == kMaxSweeps) {
      throw ConvergenceError("svd_square: no convergence after " + std::to_string(kMaxSweeps) +
                             " sweeps");
    }
    rotated = false;
    for (Eigen::Index p = 0; p + 1 < d; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) rotated |= rotate_pair(a, v, p, q, tol, negligible);
    }
  }

  Eigen::VectorXd norms = a.colwise().norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

  SvdResult out;
  out.s.resize(d);
  ColMatrix u(d, d);
  ColMatrix v_sorted(d, d);
  // Columns skipped by the rotations are not orthogonal to anything, so they
  // must fall on the deficient side too.
  const double cutoff = std::max(norms(order.front()) * kRankTol, noise);
  std::vector<Eigen::Index> good;
  std::vector<Eigen::Index> deficient;
  for (Eigen::Index j = 0; j < d; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.s(j) = norms(src);
    v_sorted.col(j) = v.col(src);
    if (norms(src) > cutoff && norms(src) > 0.0) {
      u.col(j) = a.col(src) / norms(src);
      good.push_back(j);
    } else {
      deficient.push_back(j);
    }
  }
  for (Eigen::Index j : deficient) {
    complete_column(u, j, good);
    good.push_back(j);
  }
  out.u = u;
  out.v = v_sorted;
  return out;
}

}  // namespace procalign
