#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gps/common.hpp"
#include "gps/kernels.hpp"

namespace gps {

/// Dense complex matrix, column-major. Column j is contiguous, which is the
/// layout the kernels want: the sampling matrix A (n x m) keeps each
/// sampling vector a_i as one contiguous column.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cd& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const cd& operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  std::span<cd> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const cd> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  std::span<cd> flat() { return {data_.data(), data_.size()}; }
  std::span<const cd> flat() const { return {data_.data(), data_.size()}; }

  bool operator==(const CMatrix&) const = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cd> data_;
};

/// Dense real matrix, column-major.
class RMatrix {
public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[j * rows_ + i];
  }
  const double& operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  std::span<double> col(std::size_t j) {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<const double> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// -- vector helpers on top of the kernel layer --

inline double norm(std::span<const cd> v) {
  return std::sqrt(kernels::norm2_sq(v));
}

inline double norm(const CVector& v) { return norm(std::span<const cd>(v)); }

double norm(std::span<const double> v);

inline cd dot(std::span<const cd> a, std::span<const cd> x) {
  return kernels::dot_conj(a, x);
}

CVector add(std::span<const cd> a, std::span<const cd> b);
CVector sub(std::span<const cd> a, std::span<const cd> b);
void scale_inplace(CVector& v, cd alpha);

/// y = A^* x (the measurement map); y has one entry per column of A.
void adjoint_apply(const CMatrix& a, std::span<const cd> x, CVector& y);

/// out = A d = sum_i d_i a_i.
void forward_apply(const CMatrix& a, std::span<const cd> d, CVector& out);

/// out += A d.
void forward_apply_add(const CMatrix& a, std::span<const cd> d, CVector& out);

/// Stacked real/imaginary parts: [Re(z); Im(z)].
RVector realify(std::span<const cd> z);
CVector unrealify(std::span<const double> v);

}  // namespace gps
