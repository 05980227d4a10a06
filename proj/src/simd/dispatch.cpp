// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include <atomic>
#include <stdexcept>
#include <string>

#include "procalign/simd/kernels.hpp"

namespace procalign::simd {
namespace {

struct KernelTable {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  void (*dot_rows)(const double*, const double*, std::size_t, std::size_t, std::size_t,
                   double*);
};

constexpr KernelTable kScalar{Isa::Scalar, &scalar::dot, &scalar::dot_rows};
#if defined(PROCALIGN_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::dot, &avx2::dot_rows};
#endif
#if defined(PROCALIGN_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon, &neon::dot, &neon::dot_rows};
#endif

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &kScalar;
    case Isa::Avx2:
#if defined(PROCALIGN_HAVE_AVX2)
      return &kAvx2;
#else
      return nullptr;
#endif
    case Isa::Neon:
#if defined(PROCALIGN_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* detect() {
#if defined(PROCALIGN_HAVE_AVX2)
  if (isa_supported(Isa::Avx2)) return &kAvx2;
#endif
#if defined(PROCALIGN_HAVE_NEON)
  return &kNeon;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(PROCALIGN_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(PROCALIGN_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

Isa active_isa() { return active().load(std::memory_order_relaxed)->isa; }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("SIMD variant not supported here: " + std::string(isa_name(isa)));
  }
  active().store(table_for(isa), std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return active().load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

void dot_rows(std::span<const double> query, std::span<const double> rows, std::size_t stride,
              std::span<double> out) {
  if (out.empty()) return;
  const std::size_t dim = query.size();
  if (stride < dim || rows.size() < (out.size() - 1) * stride + dim) {
    throw std::invalid_argument("dot_rows: row block too small");
  }
  active().load(std::memory_order_relaxed)->dot_rows(query.data(), rows.data(), out.size(),
                                                       dim, stride, out.data());
}

}  // namespace procalign::simd
