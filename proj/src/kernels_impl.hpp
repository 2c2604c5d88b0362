#pragma once

// Internal dispatch table shared by kernels.cpp and the ISA-specific
// translation units. Not installed.

#include <cstddef>

#include "gps/common.hpp"

namespace gps::kernels::detail {

struct Table {
  cd (*dot_conj)(const cd*, const cd*, std::size_t);
  void (*axpy)(cd, const cd*, cd*, std::size_t);
  double (*norm2_sq)(const cd*, std::size_t);
  void (*amplitude_project)(const cd*, const double*, cd*, std::size_t);
  void (*mix)(double, const cd*, const cd*, cd*, std::size_t);
};

const Table& scalar_table();

#if GPS_HAVE_AVX2
const Table& avx2_table();
bool avx2_supported();
#endif

}  // namespace gps::kernels::detail
