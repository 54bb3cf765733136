// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels behind the model inner loops.
//
// Every kernel has a portable scalar reference implementation and, where the
// target supports it, a vectorized variant (AVX2+FMA on x86-64, NEON on
// AArch64). The variant is chosen once at startup from the CPU feature flags
// and can be pinned with select_backend(). Vectorized variants reassociate
// sums, so results agree with the scalar path to rounding, not bit-for-bit.
// Runs are reproducible for a fixed backend.

namespace dagfl::simd {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y *= a
  void (*scale)(double a, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Best backend the running CPU supports.
Backend detect_backend();

// Pins the dispatch table. Throws std::invalid_argument when the backend is
// unavailable on this machine.
void select_backend(Backend backend);
Backend active_backend();
const KernelTable& active_kernels();

bool backend_available(Backend backend);
std::string_view backend_name(Backend backend);
// Accepts "scalar", "avx2", "neon" and "auto".
Backend parse_backend(std::string_view name);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> y);

// out[r] = dot(row r of W, x) + bias[r]; W is rows x x.size(), row-major.
void matvec_bias(std::span<const double> w, std::span<const double> bias,
                 std::span<const double> x, std::span<double> out);

// W[r] += coeff[r] * x for every row r.
void add_outer(std::span<double> w, std::span<const double> coeff,
               std::span<const double> x);

// out[c] = dot(column c of W, v) for a rows x cols row-major W, v of length rows.
void matvec_transposed(std::span<const double> w, std::span<const double> v,
                       std::span<double> out);

}  // namespace dagfl::simd
