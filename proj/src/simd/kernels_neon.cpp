// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include <arm_neon.h>

#include <cmath>

#include "procalign/simd/kernels.hpp"

namespace procalign::simd::neon {
namespace {

inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

inline double tail(const double* a, const double* b, std::size_t from, std::size_t n,
                   double acc) {
  for (std::size_t i = from; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  const std::size_t body = n & ~std::size_t{1};
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  return tail(a, b, body, n, hsum(acc));
}

void dot_rows(const double* q, const double* rows, std::size_t n_rows, std::size_t dim,
              std::size_t stride, double* out) {
  const std::size_t body = dim & ~std::size_t{1};
  std::size_t r = 0;
  for (; r + 4 <= n_rows; r += 4) {
    const double* k0 = rows + (r + 0) * stride;
    const double* k1 = rows + (r + 1) * stride;
    const double* k2 = rows + (r + 2) * stride;
    const double* k3 = rows + (r + 3) * stride;
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    float64x2_t a2 = vdupq_n_f64(0.0);
    float64x2_t a3 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < body; i += 2) {
      const float64x2_t qv = vld1q_f64(q + i);
      a0 = vfmaq_f64(a0, qv, vld1q_f64(k0 + i));
      a1 = vfmaq_f64(a1, qv, vld1q_f64(k1 + i));
      a2 = vfmaq_f64(a2, qv, vld1q_f64(k2 + i));
      a3 = vfmaq_f64(a3, qv, vld1q_f64(k3 + i));
    }
    out[r + 0] = tail(q, k0, body, dim, hsum(a0));
    out[r + 1] = tail(q, k1, body, dim, hsum(a1));
    out[r + 2] = tail(q, k2, body, dim, hsum(a2));
    out[r + 3] = tail(q, k3, body, dim, hsum(a3));
  }
  for (; r < n_rows; ++r) out[r] = dot(q, rows + r * stride, dim);
}

}  // namespace procalign::simd::neon
