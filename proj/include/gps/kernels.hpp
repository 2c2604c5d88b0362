#pragma once

#include <cstddef>
#include <span>

#include "gps/common.hpp"

namespace gps::kernels {

// Data-parallel inner loops of the solver stack. Each kernel has a scalar
// reference implementation and, on x86-64 with AVX2+FMA, a vectorized
// variant selected at runtime. The two variants are equivalence-tested
// against each other; the scalar path is the semantic reference.

enum class Isa { scalar, avx2 };

/// Best instruction set supported by the running CPU (and compiled in).
Isa detected_isa();

/// Currently selected instruction set.
Isa active_isa();

/// Override kernel selection. scalar is always available; requesting an
/// unsupported ISA throws ConfigError. Not thread-safe against concurrent
/// kernel calls; intended for startup/tests.
void force_isa(Isa isa);

const char* isa_name(Isa isa);

/// sum_i conj(a[i]) * x[i]
cd dot_conj(std::span<const cd> a, std::span<const cd> x);

/// y += alpha * a
void axpy(cd alpha, std::span<const cd> a, std::span<cd> y);

/// sum_i |z[i]|^2
double norm2_sq(std::span<const cd> z);

/// out[i] = b[i] * z[i] / |z[i]|, with 0 where z[i] == 0
void amplitude_project(std::span<const cd> z, std::span<const double> b,
                       std::span<cd> out);

/// out = t * a + (1 - t) * p  (the relaxed-projection combination)
void mix(double t, std::span<const cd> a, std::span<const cd> p,
         std::span<cd> out);

}  // namespace gps::kernels
