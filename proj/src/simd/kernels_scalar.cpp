// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include "procalign/simd/kernels.hpp"

namespace procalign::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void dot_rows(const double* q, const double* rows, std::size_t n_rows, std::size_t dim,
              std::size_t stride, double* out) {
  for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot(q, rows + r * stride, dim);
}

}  // namespace procalign::simd::scalar
