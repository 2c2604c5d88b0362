#include "gps/kernels.hpp"

#include <atomic>
#include <cmath>

#include "kernels_impl.hpp"

namespace gps::kernels {
namespace detail {

namespace {

cd scalar_dot_conj(const cd* a, const cd* x, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double xr = x[i].real(), xi = x[i].imag();
    re += ar * xr + ai * xi;
    im += ar * xi - ai * xr;
  }
  return {re, im};
}

void scalar_axpy(cd alpha, const cd* a, cd* y, std::size_t n) {
  const double lr = alpha.real(), li = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    y[i] += cd(lr * ar - li * ai, lr * ai + li * ar);
  }
}

double scalar_norm2_sq(const cd* z, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  }
  return s;
}

void scalar_amplitude_project(const cd* z, const double* b, cd* out,
                              std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mag =
        std::sqrt(z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
    if (mag > 0.0) {
      const double s = b[i] / mag;
      out[i] = cd(z[i].real() * s, z[i].imag() * s);
    } else {
      out[i] = cd(0.0, 0.0);
    }
  }
}

void scalar_mix(double t, const cd* a, const cd* p, cd* out, std::size_t n) {
  const double u = 1.0 - t;
  const double* ad = reinterpret_cast<const double*>(a);
  const double* pd = reinterpret_cast<const double*>(p);
  double* od = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    od[i] = t * ad[i] + u * pd[i];
  }
}

}  // namespace

const Table& scalar_table() {
  static const Table t{scalar_dot_conj, scalar_axpy, scalar_norm2_sq,
                       scalar_amplitude_project, scalar_mix};
  return t;
}

}  // namespace detail

namespace {

std::atomic<const detail::Table*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

void select(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      g_table.store(&detail::scalar_table(), std::memory_order_release);
      break;
    case Isa::avx2:
#if GPS_HAVE_AVX2
      g_table.store(&detail::avx2_table(), std::memory_order_release);
      break;
#else
      throw ConfigError("avx2 kernels not compiled in");
#endif
  }
  g_isa.store(isa, std::memory_order_release);
}

const detail::Table& table() {
  const detail::Table* t = g_table.load(std::memory_order_acquire);
  if (!t) {
    select(detected_isa());
    t = g_table.load(std::memory_order_acquire);
  }
  return *t;
}

}  // namespace

Isa detected_isa() {
#if GPS_HAVE_AVX2
  if (detail::avx2_supported()) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa active_isa() {
  table();  // ensure selection ran
  return g_isa.load(std::memory_order_acquire);
}

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    throw ConfigError("avx2 kernels unavailable on this CPU/build");
  }
  select(isa);
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

cd dot_conj(std::span<const cd> a, std::span<const cd> x) {
  if (a.size() != x.size()) throw DimensionError("dot_conj: length mismatch");
  return table().dot_conj(a.data(), x.data(), a.size());
}

void axpy(cd alpha, std::span<const cd> a, std::span<cd> y) {
  if (a.size() != y.size()) throw DimensionError("axpy: length mismatch");
  table().axpy(alpha, a.data(), y.data(), a.size());
}

double norm2_sq(std::span<const cd> z) {
  return table().norm2_sq(z.data(), z.size());
}

void amplitude_project(std::span<const cd> z, std::span<const double> b,
                       std::span<cd> out) {
  if (z.size() != b.size() || z.size() != out.size()) {
    throw DimensionError("amplitude_project: length mismatch");
  }
  table().amplitude_project(z.data(), b.data(), out.data(), z.size());
}

void mix(double t, std::span<const cd> a, std::span<const cd> p,
         std::span<cd> out) {
  if (a.size() != p.size() || a.size() != out.size()) {
    throw DimensionError("mix: length mismatch");
  }
  table().mix(t, a.data(), p.data(), out.data(), a.size());
}

}  // namespace gps::kernels
