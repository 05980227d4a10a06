// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace procalign {

// Row-major so that each word vector is a contiguous span of `dim` doubles;
// the retrieval kernels rely on this layout.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (embedding, dictionary, transform).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent matrix or lexicon shapes, invalid arguments.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A seed or induced lexicon came out empty.
class EmptyLexiconError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace procalign
