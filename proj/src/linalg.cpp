#include "gps/linalg.hpp"

#include <cmath>

namespace gps {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

CVector add(std::span<const cd> a, std::span<const cd> b) {
  if (a.size() != b.size()) throw DimensionError("add: length mismatch");
  CVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

CVector sub(std::span<const cd> a, std::span<const cd> b) {
  if (a.size() != b.size()) throw DimensionError("sub: length mismatch");
  CVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

void scale_inplace(CVector& v, cd alpha) {
  for (auto& z : v) z *= alpha;
}

void adjoint_apply(const CMatrix& a, std::span<const cd> x, CVector& y) {
  if (x.size() != a.rows()) throw DimensionError("adjoint_apply: bad x");
  y.resize(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    y[j] = kernels::dot_conj(a.col(j), x);
  }
}

void forward_apply(const CMatrix& a, std::span<const cd> d, CVector& out) {
  out.assign(a.rows(), cd(0.0, 0.0));
  forward_apply_add(a, d, out);
}

void forward_apply_add(const CMatrix& a, std::span<const cd> d, CVector& out) {
  if (d.size() != a.cols()) throw DimensionError("forward_apply: bad d");
  if (out.size() != a.rows()) throw DimensionError("forward_apply: bad out");
  for (std::size_t j = 0; j < a.cols(); ++j) {
    kernels::axpy(d[j], a.col(j), out);
  }
}

RVector realify(std::span<const cd> z) {
  RVector out(2 * z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = z[i].real();
    out[z.size() + i] = z[i].imag();
  }
  return out;
}

CVector unrealify(std::span<const double> v) {
  if (v.size() % 2 != 0) throw DimensionError("unrealify: odd length");
  const std::size_t k = v.size() / 2;
  CVector out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = cd(v[i], v[k + i]);
  return out;
}

}  // namespace gps
