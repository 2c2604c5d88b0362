#include "gps/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace gps::io {

namespace {

constexpr char kMatrixMagic[8] = {'G', 'P', 'S', 'M', 'A', 'T', '0', '1'};
constexpr char kVectorMagic[8] = {'G', 'P', 'S', 'V', 'E', 'C', '0', '1'};

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>(v >> (8 * i)));
}

void put_f64(std::string& buf, double d) {
  put_u64(buf, std::bit_cast<std::uint64_t>(d));
}

class Reader {
public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError(IoError::Kind::open, "cannot open " + path);
    path_ = path;
  }

  void bytes(char* out, std::size_t count) {
    in_.read(out, static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in_.gcount()) != count) {
      throw IoError(IoError::Kind::truncated,
                    path_ + ": file shorter than declared payload");
    }
  }

  std::uint64_t u64() {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::uint8_t u8() {
    char c;
    bytes(&c, 1);
    return static_cast<std::uint8_t>(c);
  }

private:
  std::ifstream in_;
  std::string path_;
};

void write_file(const std::string& path, const std::string& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoError::Kind::open, "cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError(IoError::Kind::write, "write failed: " + path);
}

void check_magic(Reader& r, const char (&magic)[8], const std::string& path) {
  char got[8];
  r.bytes(got, 8);
  if (std::memcmp(got, magic, 8) != 0) {
    throw IoError(IoError::Kind::magic, path + ": magic mismatch");
  }
}

std::string payload(std::size_t count, const cd* data, bool complex_field) {
  std::string buf;
  buf.reserve(count * (complex_field ? 16 : 8));
  for (std::size_t i = 0; i < count; ++i) {
    put_f64(buf, data[i].real());
    if (complex_field) put_f64(buf, data[i].imag());
  }
  return buf;
}

}  // namespace

RVector LoadedVector::as_real() const {
  RVector out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
  return out;
}

void save_matrix(const std::string& path, const CMatrix& m,
                 model::FieldKind field) {
  const bool complex_field = field == model::FieldKind::complex;
  std::string buf(kMatrixMagic, 8);
  put_u64(buf, m.rows());
  put_u64(buf, m.cols());
  buf.push_back(complex_field ? 1 : 0);
  // row-major payload
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!complex_field && m(i, j).imag() != 0.0) {
        throw ConfigError("save_matrix: complex entries in a real file");
      }
      put_f64(buf, m(i, j).real());
      if (complex_field) put_f64(buf, m(i, j).imag());
    }
  }
  write_file(path, buf);
}

LoadedMatrix load_matrix(const std::string& path) {
  Reader r(path);
  check_magic(r, kMatrixMagic, path);
  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  const std::uint8_t flag = r.u8();
  if (flag > 1) throw IoError(IoError::Kind::header, path + ": bad field flag");
  if (rows == 0 || cols == 0 || rows * cols > (std::uint64_t{1} << 32)) {
    throw IoError(IoError::Kind::header, path + ": implausible dimensions");
  }
  LoadedMatrix out;
  out.field = flag ? model::FieldKind::complex : model::FieldKind::real;
  out.matrix = CMatrix(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      const double re = r.f64();
      const double im = flag ? r.f64() : 0.0;
      out.matrix(i, j) = cd(re, im);
    }
  }
  return out;
}

void save_vector(const std::string& path, std::span<const cd> v) {
  std::string buf(kVectorMagic, 8);
  put_u64(buf, v.size());
  put_u64(buf, 1);
  buf.push_back(1);
  buf += payload(v.size(), v.data(), true);
  write_file(path, buf);
}

void save_vector(const std::string& path, std::span<const double> v) {
  std::string buf(kVectorMagic, 8);
  put_u64(buf, v.size());
  put_u64(buf, 1);
  buf.push_back(0);
  for (double d : v) put_f64(buf, d);
  write_file(path, buf);
}

LoadedVector load_vector(const std::string& path) {
  Reader r(path);
  check_magic(r, kVectorMagic, path);
  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  const std::uint8_t flag = r.u8();
  if (flag > 1) throw IoError(IoError::Kind::header, path + ": bad field flag");
  if (cols != 1 || rows * cols > (std::uint64_t{1} << 32)) {
    throw IoError(IoError::Kind::header, path + ": implausible dimensions");
  }
  LoadedVector out;
  out.field = flag ? model::FieldKind::complex : model::FieldKind::real;
  out.data.resize(rows);
  for (std::uint64_t i = 0; i < rows; ++i) {
    const double re = r.f64();
    const double im = flag ? r.f64() : 0.0;
    out.data[i] = cd(re, im);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, p);
  if (s.find_first_of(".eEn") == std::string::npos) {
    s += ".0";  // keep the value recognizably floating point
  }
  return s;
}

void export_amplitudes_csv(const std::string& path,
                           std::span<const double> b) {
  std::string buf = "index,value\n";
  for (std::size_t i = 0; i < b.size(); ++i) {
    buf += std::to_string(i);
    buf += ',';
    buf += format_double(b[i]);
    buf += '\n';
  }
  write_file(path, buf);
}

}  // namespace gps::io
