#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "gps/common.hpp"
#include "gps/linalg.hpp"

namespace gps::model {

enum class FieldKind { real, complex };

struct Structure {
  enum class Kind { generic, scaled_isometric, oversampled_fourier };
  Kind kind = Kind::generic;
  double scale = 0.0;  // l with A A^* = l I (scaled_isometric / fourier)
  int height = 0, width = 0, pad_factor = 1;  // oversampled_fourier only
};

/// The sampling matrix A in C^{n x m} (column i holds a_i) together with a
/// structure tag. Oversampled-Fourier ensembles are operator-backed and
/// expose matrix-free apply/adjoint instead of a dense A.
class SamplingEnsemble {
public:
  SamplingEnsemble() = default;  // empty; fill via the named constructors

  /// Generic dense ensemble. Validates that A^* has full rank on its
  /// smaller side (Cholesky of the Gram matrix must not break down).
  static SamplingEnsemble dense(CMatrix a, FieldKind field);

  /// Dense ensemble declared to satisfy A A^* = l I; the scaling is checked
  /// to 1e-10 in the max norm.
  static SamplingEnsemble dense_isometric(CMatrix a, double l,
                                          FieldKind field);

  /// Oversampled 2-D DFT ensemble: A^* x = DFT of the zero-padded image,
  /// with A A^* = l I for l = pad^2 * height * width.
  static SamplingEnsemble oversampled_fourier(int height, int width,
                                              int pad_factor);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  FieldKind field() const { return field_; }
  const Structure& structure() const { return structure_; }

  bool has_dense() const { return matrix_.rows() > 0; }
  const CMatrix& matrix() const;

  /// y = A^* x  (length m).
  CVector apply_adjoint(std::span<const cd> x) const;
  /// out = A d  (length n).
  CVector apply_forward(std::span<const cd> d) const;

private:
  std::size_t n_ = 0, m_ = 0;
  FieldKind field_ = FieldKind::complex;
  Structure structure_;
  CMatrix matrix_;  // empty for operator-backed ensembles
};

/// Ensemble plus data: optional ground truth, amplitude vector b, noise
/// metadata. Immutable after construction; safe to share across trials.
struct ProblemInstance {
  SamplingEnsemble ensemble;
  std::optional<CVector> truth;
  RVector amplitudes;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  std::size_t clamped = 0;  // negative noisy amplitudes clamped to zero

  double b_min() const;
};

struct PriorSpec {
  enum class Kind { none, indicator, soft_threshold, hard_threshold };
  Kind kind = Kind::none;
  BVector support;  // length n; empty means full support
  bool real_valued = false;
  bool nonnegative = false;
  double p = 0.0;  // soft threshold
  int s = 0;       // hard threshold sparsity

  static PriorSpec none() { return {}; }
  static PriorSpec indicator(BVector support, bool real_valued,
                             bool nonnegative);
  static PriorSpec soft(double p, BVector support = {});
  static PriorSpec hard(int s, BVector support = {});

  bool in_support(std::size_t i) const {
    return support.empty() || support[i] != 0;
  }
  std::size_t support_size(std::size_t n) const;
};

/// Random Gaussian instance. Real: entries of A and truth are N(0,1).
/// Complex: N(0,1/2) + i N(0,1/2), so |a_i|^2 has unit mean. b = |A^* truth|.
ProblemInstance gen_gaussian(int n, int m, FieldKind field, std::uint64_t seed);

/// Corrupt amplitudes with Gaussian noise scaled so that
/// 20 log10(||b|| / ||eps||) equals snr_db exactly; negative entries are
/// clamped to zero and counted. +infinity passes b through untouched.
ProblemInstance add_noise(const ProblemInstance& instance, double snr_db,
                          std::uint64_t seed);

/// |A^* x| elementwise.
RVector measure(const SamplingEnsemble& ensemble, std::span<const cd> x);

/// min over |alpha| = 1 of ||x - alpha truth|| / ||truth||.
double rel_err(std::span<const cd> x, std::span<const cd> truth);

/// || |A^* x| - b || / ||b||  (|| |A^* x| || when b = 0); truth-free stopping
/// surrogate.
double residual(const SamplingEnsemble& ensemble, std::span<const cd> x,
                std::span<const double> b);

/// Dense m x n matrix of A^*, materialized column by column through the
/// operator interface. Diagnostics/test helper.
CMatrix materialize_adjoint(const SamplingEnsemble& ensemble);

/// Unnormalized 2-D DFT over a row-major h x w grid; sign is the exponent
/// sign (-1 forward). Radix-2 when a side is a power of two, direct
/// transform otherwise.
void dft_2d(CVector& grid, std::size_t h, std::size_t w, int sign);

}  // namespace gps::model
