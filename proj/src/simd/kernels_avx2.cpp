// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "procalign/simd/kernels.hpp"

namespace procalign::simd::avx2 {
namespace {

// Fixed reduction order: ((l0 + l1) + (l2 + l3)). dot() and every lane of
// dot_rows() use it, which keeps the two bitwise consistent.
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d lo_pair = _mm_add_sd(lo, _mm_unpackhi_pd(lo, lo));
  __m128d hi_pair = _mm_add_sd(hi, _mm_unpackhi_pd(hi, hi));
  return _mm_cvtsd_f64(_mm_add_sd(lo_pair, hi_pair));
}

inline double tail(const double* a, const double* b, std::size_t from, std::size_t n,
                   double acc) {
  for (std::size_t i = from; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  return tail(a, b, body, n, hsum(acc));
}

void dot_rows(const double* q, const double* rows, std::size_t n_rows, std::size_t dim,
              std::size_t stride, double* out) {
  const std::size_t body = dim & ~std::size_t{3};
  std::size_t r = 0;
  // Four rows at a time share each query load; one accumulator per row.
  for (; r + 4 <= n_rows; r += 4) {
    const double* k0 = rows + (r + 0) * stride;
    const double* k1 = rows + (r + 1) * stride;
    const double* k2 = rows + (r + 2) * stride;
    const double* k3 = rows + (r + 3) * stride;
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += 4) {
      const __m256d qv = _mm256_loadu_pd(q + i);
      a0 = _mm256_fmadd_pd(qv, _mm256_loadu_pd(k0 + i), a0);
      a1 = _mm256_fmadd_pd(qv, _mm256_loadu_pd(k1 + i), a1);
      a2 = _mm256_fmadd_pd(qv, _mm256_loadu_pd(k2 + i), a2);
      a3 = _mm256_fmadd_pd(qv, _mm256_loadu_pd(k3 + i), a3);
    }
    out[r + 0] = tail(q, k0, body, dim, hsum(a0));
    out[r + 1] = tail(q, k1, body, dim, hsum(a1));
    out[r + 2] = tail(q, k2, body, dim, hsum(a2));
    out[r + 3] = tail(q, k3, body, dim, hsum(a3));
  }
  for (; r < n_rows; ++r) out[r] = dot(q, rows + r * stride, dim);
}

}  // namespace procalign::simd::avx2
