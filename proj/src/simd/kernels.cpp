// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/simd/kernels.hpp"

#include <atomic>
#include <cassert>
#include <stdexcept>
#include <string>

namespace dagfl::simd {

#if defined(DAGFL_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif
#if defined(__aarch64__)
namespace neon {
const KernelTable& table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(DAGFL_HAVE_AVX2)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2::table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(__aarch64__)
  return &neon::table();
#else
  return nullptr;
#endif
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::scalar: return true;
    case Backend::avx2: return avx2_kernels() != nullptr;
    case Backend::neon: return neon_kernels() != nullptr;
  }
  return false;
}

Backend detect_backend() {
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

namespace {

const KernelTable* table_for(Backend backend) {
  switch (backend) {
    case Backend::scalar: return &scalar_kernels();
    case Backend::avx2: return avx2_kernels();
    case Backend::neon: return neon_kernels();
  }
  return nullptr;
}

struct Dispatch {
  std::atomic<const KernelTable*> table{nullptr};
  std::atomic<Backend> backend{Backend::scalar};

  Dispatch() {
    Backend b = detect_backend();
    backend.store(b);
    table.store(table_for(b));
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

void select_backend(Backend backend) {
  const KernelTable* t = table_for(backend);
  if (t == nullptr) {
    throw std::invalid_argument("kernel backend not available: " +
                                std::string(backend_name(backend)));
  }
  dispatch().table.store(t);
  dispatch().backend.store(backend);
}

Backend active_backend() { return dispatch().backend.load(); }

const KernelTable& active_kernels() { return *dispatch().table.load(); }

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "auto") return detect_backend();
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  if (name == "neon") return Backend::neon;
  throw std::invalid_argument("unknown kernel backend: " + std::string(name));
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_kernels().dot(a.data(), b.data(), a.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active_kernels().axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> y) { active_kernels().scale(a, y.data(), y.size()); }

void matvec_bias(std::span<const double> w, std::span<const double> bias,
                 std::span<const double> x, std::span<double> out) {
  const auto& k = active_kernels();
  const std::size_t cols = x.size();
  assert(w.size() == out.size() * cols && bias.size() == out.size());
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = k.dot(w.data() + r * cols, x.data(), cols) + bias[r];
  }
}

void add_outer(std::span<double> w, std::span<const double> coeff,
               std::span<const double> x) {
  const auto& k = active_kernels();
  const std::size_t cols = x.size();
  assert(w.size() == coeff.size() * cols);
  for (std::size_t r = 0; r < coeff.size(); ++r) {
    if (coeff[r] != 0.0) k.axpy(coeff[r], x.data(), w.data() + r * cols, cols);
  }
}

void matvec_transposed(std::span<const double> w, std::span<const double> v,
                       std::span<double> out) {
  const auto& k = active_kernels();
  const std::size_t cols = out.size();
  assert(w.size() == v.size() * cols);
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (v[r] != 0.0) k.axpy(v[r], w.data() + r * cols, out.data(), cols);
  }
}

}  // namespace dagfl::simd
