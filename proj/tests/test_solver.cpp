// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "procalign/solver.hpp"
#include "procalign/synthkit.hpp"
#include "support/oracles.hpp"

using namespace procalign;

namespace {

double fro2(const Matrix& m) { return m.squaredNorm(); }

Matrix rotation2(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

TEST_CASE("svd of simple matrices") {
  const auto id = svd_square(Matrix::Identity(4, 4));
  CHECK((id.s.array() - 1.0).abs().maxCoeff() <= 1e-12);

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1.0, 3.0, 2.0;
  const auto r = svd_square(d);
  CHECK(r.s(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.s(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.s(2) == doctest::Approx(1.0).epsilon(1e-12));

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd_square(bad), ShapeError);
  CHECK_THROWS_AS(svd_square(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("svd singular values match the eigenvalues of MᵀM") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix m = oracle::random_matrix(10, 10, 100 + seed, false);
    const auto r = svd_square(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.transpose() * m);
    std::vector<double> expected;
    for (int i = 0; i < 10; ++i) expected.push_back(std::sqrt(std::max(0.0, eig.eigenvalues()(i))));
    std::sort(expected.rbegin(), expected.rend());
    for (int i = 0; i < 10; ++i) CHECK(std::abs(r.s(i) - expected[i]) <= 1e-9 * expected[0]);

    const Matrix back = r.u * r.s.asDiagonal() * r.v.transpose();
    CHECK((back - m).cwiseAbs().maxCoeff() <= 1e-6 * m.cwiseAbs().maxCoeff());
    CHECK(orthogonality_error(r.u) <= 1e-10);
    CHECK(orthogonality_error(r.v) <= 1e-10);
  }
}

TEST_CASE("svd keeps U orthogonal on rank-deficient input") {
  Matrix m = oracle::random_matrix(6, 6, 9, false);
  m.row(5) = m.row(0) * 2.0;
  m.col(4) = m.col(1);
  const auto r = svd_square(m);
  CHECK(orthogonality_error(r.u) <= 1e-10);
  CHECK(orthogonality_error(r.v) <= 1e-10);
  CHECK(((r.u * r.s.asDiagonal() * r.v.transpose()) - m).cwiseAbs().maxCoeff() <= 1e-10);

  const auto zero = svd_square(Matrix::Zero(3, 3));
  CHECK(orthogonality_error(zero.u) <= 1e-12);
  CHECK(zero.s.maxCoeff() == 0.0);
}

TEST_CASE("procrustes stays orthogonal with fewer pairs than dimensions") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix e = oracle::random_matrix(30, 50, 200 + seed);
    const Matrix f = oracle::random_matrix(30, 50, 300 + seed);
    const auto t = procrustes_solve(e, f);
    CHECK(t.orthogonality_error() <= 1e-10);
    // Still optimal on the pairs it has: the fit beats the identity.
    CHECK((e * t.matrix() - f).squaredNorm() <= (e - f).squaredNorm());
  }
  const auto pair = make_synthetic_pair(20, 40, 0.0, 4);
  const auto t = procrustes_solve(pair.e, pair.f);
  CHECK((pair.e * t.matrix() - pair.f).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("orthogonal map invariants") {
  CHECK_NOTHROW(OrthogonalMap{rotation2(0.3)});
  Matrix reflect = Matrix::Identity(3, 3);
  reflect(2, 2) = -1.0;
  CHECK_NOTHROW(OrthogonalMap{reflect});
  CHECK_THROWS_AS(OrthogonalMap(Matrix::Identity(2, 2) * 1.1), ShapeError);
  CHECK_THROWS_AS(OrthogonalMap(Matrix::Zero(2, 3)), ShapeError);
  const auto t = OrthogonalMap(rotation2(0.7));
  CHECK((t.matrix() * t.transpose().matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <=
        1e-15);
}

TEST_CASE("procrustes on hand-built cases") {
  const Matrix e = oracle::random_matrix(20, 5, 1);
  CHECK((procrustes_solve(e, e).matrix() - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-10);

  Matrix unit = Matrix::Identity(2, 2);
  Matrix turned(2, 2);
  turned << 0.0, 1.0, -1.0, 0.0;
  const auto t = procrustes_solve(unit, turned);
  CHECK((t.matrix() - turned).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((unit * t.matrix() - turned).norm() <= 1e-12);

  CHECK_THROWS_AS(procrustes_solve(Matrix::Zero(3, 2), Matrix::Zero(4, 2)), ShapeError);
  CHECK_THROWS_AS(procrustes_solve(Matrix::Zero(3, 2), Matrix::Zero(3, 3)), ShapeError);
}

TEST_CASE("procrustes recovers a planted map") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pair = make_synthetic_pair(200, 12, 0.0, seed);
    const auto t = procrustes_solve(pair.e, pair.f);
    CHECK((t.matrix() - pair.planted.matrix()).norm() <= 1e-4);
    CHECK(t.orthogonality_error() <= 1e-10);
  }
}

TEST_CASE("procrustes beats nearby orthogonal matrices") {
  const auto pair = make_synthetic_pair(60, 6, 0.5, 3);
  const auto t = procrustes_solve(pair.e, pair.f);
  const double best = fro2(pair.e * t.matrix() - pair.f);
  for (std::uint64_t k = 0; k < 100; ++k) {
    // A small random rotation: the Q factor of I + εA stays orthogonal.
    const Matrix a = oracle::random_matrix(6, 6, 1000 + k, false) * 0.01;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Identity(6, 6) + a);
    const Matrix q = qr.householderQ();
    const Matrix other = t.matrix() * q;
    CHECK(fro2(pair.e * other - pair.f) >= best - 1e-12);
  }
}

TEST_CASE("procrustes is scale equivariant") {
  const auto pair = make_synthetic_pair(40, 5, 0.3, 8);
  const auto t = procrustes_solve(pair.e, pair.f);
  for (double c : {0.01, 3.0, 250.0}) {
    const auto scaled = procrustes_solve(pair.e * c, pair.f);
    CHECK((scaled.matrix() - t.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("gpa on identical spaces") {
  const Matrix e = oracle::random_matrix(50, 8, 4);
  const std::vector<Matrix> spaces{e, e};
  const auto state = gpa_solve(spaces);
  CHECK(state.objective_trace.back() <= 1e-10);
  const auto composite = compose_to_target(state.transforms[0], state.transforms[1]);
  CHECK((composite.matrix() - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("gpa aligns isomorphic spaces") {
  const Matrix e1 = oracle::random_matrix(80, 10, 5);
  const std::vector<Matrix> spaces{e1, e1 * random_orthogonal(10, 1).matrix(),
                                   e1 * random_orthogonal(10, 2).matrix()};
  const auto state = gpa_solve(spaces);
  CHECK(gpa_objective(spaces, state.transforms) <= 1e-8 * fro2(e1));
  for (const auto& t : state.transforms) CHECK(t.orthogonality_error() <= 1e-6);
}

TEST_CASE("gpa objective never increases across rounds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<Matrix> spaces;
    for (std::size_t i = 0; i < 2 + seed % 2; ++i) {
      spaces.push_back(oracle::random_matrix(30, 6, seed * 10 + i));
    }
    GpaOptions opts;
    opts.rng_seed = seed;
    opts.rel_tol = 0.0;
    opts.inner_iters = 30;
    const auto state = gpa_solve(spaces, opts);
    for (std::size_t r = 1; r < state.objective_trace.size(); ++r) {
      CHECK(state.objective_trace[r] <= state.objective_trace[r - 1] * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("gpa objective equals k times the spread about the latent mean") {
  std::vector<Matrix> spaces;
  for (std::uint64_t i = 0; i < 4; ++i) spaces.push_back(oracle::random_matrix(25, 5, 40 + i));
  std::vector<OrthogonalMap> maps;
  for (std::uint64_t i = 0; i < 4; ++i) maps.push_back(random_orthogonal(5, 70 + i));
  const Matrix g = gpa_latent(spaces, maps);
  double spread = 0.0;
  for (std::size_t i = 0; i < 4; ++i) spread += fro2(spaces[i] * maps[i].matrix() - g);
  double pairwise = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      pairwise += fro2(spaces[i] * maps[i].matrix() - spaces[j] * maps[j].matrix());
    }
  }
  CHECK(gpa_objective(spaces, maps) == doctest::Approx(pairwise).epsilon(1e-12));
  CHECK(pairwise == doctest::Approx(4.0 * spread).epsilon(1e-10));
}

TEST_CASE("gpa latent is stable at convergence") {
  const Matrix e1 = oracle::random_matrix(60, 7, 12);
  const std::vector<Matrix> spaces{e1, e1 * random_orthogonal(7, 3).matrix()};
  const auto state = gpa_solve(spaces);
  GpaOptions again;
  again.warm_start = state.transforms;
  again.inner_iters = 1;
  const auto next = gpa_solve(spaces, again);
  CHECK((next.latent - state.latent).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("gpa is deterministic for a fixed seed") {
  std::vector<Matrix> spaces;
  for (std::uint64_t i = 0; i < 3; ++i) spaces.push_back(oracle::random_matrix(30, 6, 90 + i));
  GpaOptions opts;
  opts.rng_seed = 77;
  const auto a = gpa_solve(spaces, opts);
  const auto b = gpa_solve(spaces, opts);
  CHECK(a.init_index == b.init_index);
  CHECK(a.objective_trace == b.objective_trace);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a.transforms[i] == b.transforms[i]);
}

TEST_CASE("gpa rejects bad input") {
  CHECK_THROWS_AS(gpa_solve(std::vector<Matrix>{}), ShapeError);
  CHECK_THROWS_AS(gpa_solve(std::vector<Matrix>{Matrix::Zero(3, 2), Matrix::Zero(4, 2)}),
                  ShapeError);
}

TEST_CASE("composition maps source rows into the target frame") {
  const auto a = random_orthogonal(6, 1);
  const auto b = random_orthogonal(6, 2);
  const auto c = compose_to_target(a, b);
  CHECK((c.matrix() - a.matrix() * b.matrix().transpose()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((compose_to_target(a, OrthogonalMap::identity(6)).matrix() - a.matrix()).norm() == 0.0);
  CHECK(c.orthogonality_error() <= 1e-12);
}

TEST_CASE("transform round trip") {
  const auto t = random_orthogonal(7, 5);
  std::stringstream buf;
  write_transform(buf, t.matrix());
  const auto back = read_transform(buf);
  CHECK((back.matrix() - t.matrix()).cwiseAbs().maxCoeff() <= 1e-8);

  std::istringstream not_square("2 3\n1 0 0\n0 1 0\n");
  CHECK_THROWS_AS(read_transform(not_square), FormatError);
  std::istringstream not_orthogonal("2 2\n1 1\n0 1\n");
  CHECK_THROWS_AS(read_transform(not_orthogonal), FormatError);
  std::istringstream truncated("2 2\n1 0\n");
  CHECK_THROWS_AS(read_transform(truncated), FormatError);
  CHECK_THROWS_AS(read_transform(std::filesystem::path("/nonexistent/T.txt")), FormatError);
}
