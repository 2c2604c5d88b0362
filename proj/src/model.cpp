#include "gps/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gps/graph_projection.hpp"

namespace gps::model {

namespace {

constexpr double kRankRatio = 1e-10;  // smallest/largest singular value gate

// Full-rank guard on the smaller Gram matrix of A: Cholesky pivots of a PSD
// matrix bracket its extreme eigenvalues, so a pivot ratio below
// kRankRatio^2 flags an (effectively) rank-deficient A^*.
void check_full_rank(const CMatrix& a) {
  const bool tall = a.cols() >= a.rows();
  const std::size_t k = tall ? a.rows() : a.cols();
  CMatrix g(k, k);
  if (tall) {
    for (std::size_t t = 0; t < a.cols(); ++t) {
      const auto col = a.col(t);
      for (std::size_t j = 0; j < k; ++j) {
        kernels::axpy(std::conj(col[j]), col, g.col(j));
      }
    }
  } else {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < k; ++i) {
        g(i, j) = kernels::dot_conj(a.col(i), a.col(j));
      }
    }
  }
  double max_pivot = 0.0, min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    double pivot = g(j, j).real();
    for (std::size_t t = 0; t < j; ++t) pivot -= std::norm(g(j, t));
    if (!(pivot > 0.0)) {
      throw ConfigError("sampling matrix is rank-deficient");
    }
    const double d = std::sqrt(pivot);
    max_pivot = std::max(max_pivot, pivot);
    min_pivot = std::min(min_pivot, pivot);
    for (std::size_t i = j + 1; i < k; ++i) {
      cd s = g(i, j);
      for (std::size_t t = 0; t < j; ++t) s -= g(i, t) * std::conj(g(j, t));
      g(i, j) = s / d;  // column of L stored in place for later Schur updates
    }
    g(j, j) = d;
  }
  if (min_pivot < kRankRatio * kRankRatio * max_pivot) {
    throw ConfigError("sampling matrix is numerically rank-deficient");
  }
}

void check_real(const CMatrix& a) {
  for (const cd& z : a.flat()) {
    if (z.imag() != 0.0) {
      throw ConfigError("real-field ensemble has nonzero imaginary entries");
    }
  }
}

void check_scaled_isometric(const CMatrix& a, double l) {
  // ||A A^* - l I||_max < 1e-10 * l
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cd s(0.0, 0.0);
      for (std::size_t k = 0; k < a.cols(); ++k) {
        s += a(i, k) * std::conj(a(j, k));
      }
      if (i == j) s -= l;
      if (std::abs(s) >= 1e-10 * std::max(1.0, l)) {
        throw ConfigError("matrix does not satisfy A A^* = l I");
      }
    }
  }
}

}  // namespace

SamplingEnsemble SamplingEnsemble::dense(CMatrix a, FieldKind field) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ConfigError("empty sampling matrix");
  }
  if (field == FieldKind::real) check_real(a);
  check_full_rank(a);
  SamplingEnsemble e;
  e.n_ = a.rows();
  e.m_ = a.cols();
  e.field_ = field;
  e.structure_.kind = Structure::Kind::generic;
  e.matrix_ = std::move(a);
  return e;
}

SamplingEnsemble SamplingEnsemble::dense_isometric(CMatrix a, double l,
                                                   FieldKind field) {
  if (!(l > 0.0)) throw ConfigError("isometry scale must be positive");
  if (field == FieldKind::real) check_real(a);
  check_scaled_isometric(a, l);
  SamplingEnsemble e;
  e.n_ = a.rows();
  e.m_ = a.cols();
  e.field_ = field;
  e.structure_.kind = Structure::Kind::scaled_isometric;
  e.structure_.scale = l;
  e.matrix_ = std::move(a);
  return e;
}

SamplingEnsemble SamplingEnsemble::oversampled_fourier(int height, int width,
                                                       int pad_factor) {
  if (height < 1 || width < 1) throw ConfigError("bad image dimensions");
  if (pad_factor < 1) throw ConfigError("pad_factor must be >= 1");
  const std::size_t bigh = static_cast<std::size_t>(height) * pad_factor;
  const std::size_t bigw = static_cast<std::size_t>(width) * pad_factor;
  if (bigh * bigw > (std::size_t{1} << 40)) {
    throw ConfigError("padded grid too large");
  }
  SamplingEnsemble e;
  e.n_ = static_cast<std::size_t>(height) * width;
  e.m_ = bigh * bigw;
  e.field_ = FieldKind::complex;
  e.structure_.kind = Structure::Kind::oversampled_fourier;
  e.structure_.scale = static_cast<double>(bigh * bigw);
  e.structure_.height = height;
  e.structure_.width = width;
  e.structure_.pad_factor = pad_factor;
  return e;
}

const CMatrix& SamplingEnsemble::matrix() const {
  if (!has_dense()) {
    throw ConfigError("ensemble is operator-backed; no dense matrix");
  }
  return matrix_;
}

CVector SamplingEnsemble::apply_adjoint(std::span<const cd> x) const {
  if (x.size() != n_) throw DimensionError("apply_adjoint: bad length");
  if (has_dense()) {
    CVector y;
    adjoint_apply(matrix_, x, y);
    return y;
  }
  const std::size_t h = structure_.height, w = structure_.width;
  const std::size_t bh = h * structure_.pad_factor;
  const std::size_t bw = w * structure_.pad_factor;
  CVector grid(bh * bw, cd(0.0, 0.0));
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      grid[r * bw + c] = x[r * w + c];
    }
  }
  dft_2d(grid, bh, bw, -1);
  return grid;
}

CVector SamplingEnsemble::apply_forward(std::span<const cd> d) const {
  if (d.size() != m_) throw DimensionError("apply_forward: bad length");
  if (has_dense()) {
    CVector out;
    forward_apply(matrix_, d, out);
    return out;
  }
  const std::size_t h = structure_.height, w = structure_.width;
  const std::size_t bh = h * structure_.pad_factor;
  const std::size_t bw = w * structure_.pad_factor;
  CVector grid(d.begin(), d.end());
  dft_2d(grid, bh, bw, +1);
  CVector out(n_);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      out[r * w + c] = grid[r * bw + c];
    }
  }
  return out;
}

double ProblemInstance::b_min() const {
  double b = std::numeric_limits<double>::infinity();
  for (double v : amplitudes) b = std::min(b, v);
  return b;
}

PriorSpec PriorSpec::indicator(BVector support, bool real_valued,
                               bool nonnegative) {
  PriorSpec s;
  s.kind = Kind::indicator;
  s.support = std::move(support);
  s.real_valued = real_valued;
  s.nonnegative = nonnegative;
  return s;
}

PriorSpec PriorSpec::soft(double p, BVector support) {
  if (!(p > 0.0)) throw ConfigError("soft threshold requires p > 0");
  PriorSpec s;
  s.kind = Kind::soft_threshold;
  s.p = p;
  s.support = std::move(support);
  return s;
}

PriorSpec PriorSpec::hard(int sparsity, BVector support) {
  if (sparsity < 0) throw ConfigError("hard threshold requires s >= 0");
  PriorSpec s;
  s.kind = Kind::hard_threshold;
  s.s = sparsity;
  s.support = std::move(support);
  return s;
}

std::size_t PriorSpec::support_size(std::size_t n) const {
  if (support.empty()) return n;
  std::size_t c = 0;
  for (std::uint8_t v : support) c += (v != 0);
  return c;
}

ProblemInstance gen_gaussian(int n, int m, FieldKind field,
                             std::uint64_t seed) {
  if (n < 1 || m < 1) throw ConfigError("gen_gaussian: n, m must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double cscale = std::numbers::sqrt2 / 2.0;  // 1/sqrt(2)

  auto draw = [&](std::size_t count, CVector& out) {
    out.resize(count);
    if (field == FieldKind::real) {
      for (auto& z : out) z = cd(gauss(rng), 0.0);
    } else {
      for (auto& z : out) {
        const double re = gauss(rng) * cscale;
        const double im = gauss(rng) * cscale;
        z = cd(re, im);
      }
    }
  };

  CMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < a.cols(); ++j) {
    CVector col;
    draw(a.rows(), col);
    std::copy(col.begin(), col.end(), a.col(j).begin());
  }
  CVector truth;
  draw(static_cast<std::size_t>(n), truth);

  ProblemInstance inst;
  inst.ensemble = SamplingEnsemble::dense(std::move(a), field);
  inst.amplitudes = measure(inst.ensemble, truth);
  inst.truth = std::move(truth);
  inst.seed = seed;
  return inst;
}

ProblemInstance add_noise(const ProblemInstance& instance, double snr_db,
                          std::uint64_t seed) {
  if (std::isnan(snr_db) ||
      snr_db == -std::numeric_limits<double>::infinity()) {
    throw ConfigError("add_noise: snr_db must be finite or +inf");
  }
  ProblemInstance out = instance;
  out.snr_db = snr_db;
  out.clamped = 0;
  if (snr_db == std::numeric_limits<double>::infinity()) {
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RVector eps(instance.amplitudes.size());
  for (auto& e : eps) e = gauss(rng);
  const double target =
      norm(std::span<const double>(instance.amplitudes)) *
      std::pow(10.0, -snr_db / 20.0);
  const double raw = norm(std::span<const double>(eps));
  const double scale = raw > 0.0 ? target / raw : 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    double v = instance.amplitudes[i] + scale * eps[i];
    if (v < 0.0) {
      v = 0.0;
      ++out.clamped;
    }
    out.amplitudes[i] = v;
  }
  return out;
}

RVector measure(const SamplingEnsemble& ensemble, std::span<const cd> x) {
  const CVector y = ensemble.apply_adjoint(x);
  RVector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::abs(y[i]);
  return out;
}

double rel_err(std::span<const cd> x, std::span<const cd> truth) {
  if (x.size() != truth.size()) throw DimensionError("rel_err: bad lengths");
  const double tnorm = norm(truth);
  if (tnorm == 0.0) throw ConfigError("rel_err: zero truth vector");
  const cd s = kernels::dot_conj(truth, x);
  const double mag = std::abs(s);
  const cd alpha = mag > 0.0 ? s / mag : cd(1.0, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += std::norm(x[i] - alpha * truth[i]);
  }
  return std::sqrt(acc) / tnorm;
}

double residual(const SamplingEnsemble& ensemble, std::span<const cd> x,
                std::span<const double> b) {
  if (b.size() != ensemble.m()) throw DimensionError("residual: bad b");
  const RVector meas = measure(ensemble, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < meas.size(); ++i) {
    const double d = meas[i] - b[i];
    acc += d * d;
  }
  const double bnorm = norm(b);
  return bnorm > 0.0 ? std::sqrt(acc) / bnorm : norm(std::span<const double>(meas));
}

CMatrix materialize_adjoint(const SamplingEnsemble& ensemble) {
  CMatrix out(ensemble.m(), ensemble.n());
  CVector e(ensemble.n(), cd(0.0, 0.0));
  for (std::size_t j = 0; j < ensemble.n(); ++j) {
    e[j] = 1.0;
    const CVector col = ensemble.apply_adjoint(e);
    std::copy(col.begin(), col.end(), out.col(j).begin());
    e[j] = 0.0;
  }
  return out;
}

namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::vector<cd> twiddles(std::size_t len, int sign) {
  std::vector<cd> tw(len / 2);
  const double base = 2.0 * std::numbers::pi * sign / static_cast<double>(len);
  for (std::size_t j = 0; j < tw.size(); ++j) {
    tw[j] = std::polar(1.0, base * static_cast<double>(j));
  }
  return tw;
}

void fft_pow2(cd* v, std::size_t len, const std::vector<cd>& tw) {
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < len; ++i) {
    std::size_t bit = len >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
  for (std::size_t size = 2; size <= len; size <<= 1) {
    const std::size_t half = size / 2;
    const std::size_t step = len / size;
    for (std::size_t start = 0; start < len; start += size) {
      for (std::size_t j = 0; j < half; ++j) {
        const cd w = tw[j * step];
        const cd t = w * v[start + half + j];
        v[start + half + j] = v[start + j] - t;
        v[start + j] += t;
      }
    }
  }
}

void dft_direct(cd* v, std::size_t len, int sign, std::vector<cd>& scratch) {
  scratch.assign(len, cd(0.0, 0.0));
  const double base = 2.0 * std::numbers::pi * sign / static_cast<double>(len);
  for (std::size_t k = 0; k < len; ++k) {
    cd acc(0.0, 0.0);
    for (std::size_t j = 0; j < len; ++j) {
      acc += v[j] * std::polar(1.0, base * static_cast<double>(k * j % len));
    }
    scratch[k] = acc;
  }
  std::copy(scratch.begin(), scratch.end(), v);
}

}  // namespace

void dft_2d(CVector& grid, std::size_t h, std::size_t w, int sign) {
  if (grid.size() != h * w) throw DimensionError("dft_2d: bad grid size");
  std::vector<cd> scratch;
  if (is_pow2(w)) {
    const auto tw = twiddles(w, sign);
    for (std::size_t r = 0; r < h; ++r) fft_pow2(grid.data() + r * w, w, tw);
  } else {
    for (std::size_t r = 0; r < h; ++r) {
      dft_direct(grid.data() + r * w, w, sign, scratch);
    }
  }
  std::vector<cd> column(h);
  const auto tw = is_pow2(h) ? twiddles(h, sign) : std::vector<cd>{};
  for (std::size_t c = 0; c < w; ++c) {
    for (std::size_t r = 0; r < h; ++r) column[r] = grid[r * w + c];
    if (is_pow2(h)) {
      fft_pow2(column.data(), h, tw);
    } else {
      dft_direct(column.data(), h, sign, scratch);
    }
    for (std::size_t r = 0; r < h; ++r) grid[r * w + c] = column[r];
  }
}

}  // namespace gps::model
