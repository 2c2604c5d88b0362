// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be reached through the runtime dispatch in
// kernels.cpp after avx2_supported() returned true.

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace gps::kernels::detail {
namespace {

inline cd reduce_complex(__m256d acc) {
  // acc = [re0, im0, re1, im1]
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

inline double reduce_scalar(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

cd avx2_dot_conj(const cd* a, const cd* x, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* xd = reinterpret_cast<const double*>(x);
  const __m256d neg_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(ad + 2 * i);
    __m256d vx = _mm256_loadu_pd(xd + 2 * i);
    __m256d a_re = _mm256_movedup_pd(va);
    __m256d a_im = _mm256_permute_pd(va, 0xF);
    __m256d x_sn = _mm256_xor_pd(_mm256_permute_pd(vx, 0x5), neg_odd);
    acc = _mm256_fmadd_pd(a_re, vx, _mm256_fmadd_pd(a_im, x_sn, acc));
  }
  cd sum = reduce_complex(acc);
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double xr = x[i].real(), xi = x[i].imag();
    sum += cd(ar * xr + ai * xi, ar * xi - ai * xr);
  }
  return sum;
}

void avx2_axpy(cd alpha, const cd* a, cd* y, std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d lr = _mm256_set1_pd(alpha.real());
  const __m256d li = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(ad + 2 * i);
    __m256d vy = _mm256_loadu_pd(yd + 2 * i);
    __m256d t = _mm256_mul_pd(li, _mm256_permute_pd(va, 0x5));
    __m256d prod = _mm256_fmaddsub_pd(lr, va, t);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(vy, prod));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    y[i] += cd(alpha.real() * ar - alpha.imag() * ai,
               alpha.real() * ai + alpha.imag() * ar);
  }
}

double avx2_norm2_sq(const cd* z, std::size_t n) {
  const double* zd = reinterpret_cast<const double*>(z);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(zd + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = reduce_scalar(acc);
  for (; i < n; ++i) {
    s += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  }
  return s;
}

void avx2_amplitude_project(const cd* z, const double* b, cd* out,
                            std::size_t n) {
  const double* zd = reinterpret_cast<const double*>(z);
  double* od = reinterpret_cast<double*>(out);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vz = _mm256_loadu_pd(zd + 2 * i);
    __m128d b2 = _mm_loadu_pd(b + i);
    __m256d bb = _mm256_permute4x64_pd(_mm256_castpd128_pd256(b2), 0x50);
    __m256d sq = _mm256_mul_pd(vz, vz);
    __m256d mag2 = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
    __m256d mag = _mm256_sqrt_pd(mag2);
    __m256d nz = _mm256_cmp_pd(mag, zero, _CMP_GT_OQ);
    __m256d sc = _mm256_and_pd(_mm256_div_pd(bb, mag), nz);
    _mm256_storeu_pd(od + 2 * i, _mm256_mul_pd(vz, sc));
  }
  for (; i < n; ++i) {
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

void avx2_mix(double t, const cd* a, const cd* p, cd* out, std::size_t n) {
  const double u = 1.0 - t;
  const double* ad = reinterpret_cast<const double*>(a);
  const double* pd = reinterpret_cast<const double*>(p);
  double* od = reinterpret_cast<double*>(out);
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d vu = _mm256_set1_pd(u);
  const std::size_t nd = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= nd; i += 4) {
    __m256d va = _mm256_loadu_pd(ad + i);
    __m256d vp = _mm256_loadu_pd(pd + i);
    _mm256_storeu_pd(od + i, _mm256_fmadd_pd(vt, va, _mm256_mul_pd(vu, vp)));
  }
  for (; i < nd; ++i) {
    od[i] = t * ad[i] + u * pd[i];
  }
}

}  // namespace

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Table& avx2_table() {
  static const Table t{avx2_dot_conj, avx2_axpy, avx2_norm2_sq,
                       avx2_amplitude_project, avx2_mix};
  return t;
}

}  // namespace gps::kernels::detail
