// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace procalign::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool isa_supported(Isa isa);

/// Every supported variant, Scalar first.
std::vector<Isa> supported_isas();

/// The variant used by dot()/dot_rows(). Chosen on first use as the widest
/// supported variant.
Isa active_isa();

/// Pins the active variant (equivalence tests, benchmarking). Throws
/// std::invalid_argument when the variant is unsupported on this machine.
void force_isa(Isa isa);

/// Inner product of two equally sized vectors.
double dot(std::span<const double> a, std::span<const double> b);

/// out[r] = dot(query, rows[r * stride .. r * stride + query.size())) for
/// r < out.size(). Each entry is bitwise equal to the corresponding dot()
/// call under the same variant.
void dot_rows(std::span<const double> query, std::span<const double> rows,
              std::size_t stride, std::span<double> out);

// Variant entry points, exposed for equivalence testing. The generic entry
// points above forward to one of these.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void dot_rows(const double* q, const double* rows, std::size_t n_rows, std::size_t dim,
              std::size_t stride, double* out);
}  // namespace scalar

#if defined(PROCALIGN_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void dot_rows(const double* q, const double* rows, std::size_t n_rows, std::size_t dim,
              std::size_t stride, double* out);
}  // namespace avx2
#endif

#if defined(PROCALIGN_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void dot_rows(const double* q, const double* rows, std::size_t n_rows, std::size_t dim,
              std::size_t stride, double* out);
}  // namespace neon
#endif

}  // namespace procalign::simd
