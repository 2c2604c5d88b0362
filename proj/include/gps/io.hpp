#pragma once

#include <string>

#include "gps/linalg.hpp"
#include "gps/model.hpp"

namespace gps::io {

/// Binary matrix/vector files: 8-byte magic ("GPSMAT01" / "GPSVEC01"),
/// little-endian u64 rows, u64 cols, u8 field flag (0 real, 1 complex),
/// then row-major 64-bit floats (re,im interleaved when complex).
/// Round trips are bit-exact.

class IoError : public Error {
public:
  enum class Kind { open, write, magic, header, truncated };
  IoError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

struct LoadedMatrix {
  CMatrix matrix;
  model::FieldKind field = model::FieldKind::complex;
};

struct LoadedVector {
  CVector data;
  model::FieldKind field = model::FieldKind::complex;
  RVector as_real() const;
};

void save_matrix(const std::string& path, const CMatrix& m,
                 model::FieldKind field = model::FieldKind::complex);
LoadedMatrix load_matrix(const std::string& path);

void save_vector(const std::string& path, std::span<const cd> v);
void save_vector(const std::string& path, std::span<const double> v);
LoadedVector load_vector(const std::string& path);

/// CSV export of an amplitude vector with header "index,value".
void export_amplitudes_csv(const std::string& path,
                           std::span<const double> b);

/// Shortest round-trip decimal form of a double; always re-parses to the
/// same bits. Integral-valued doubles keep a ".0" marker.
std::string format_double(double v);

}  // namespace gps::io
