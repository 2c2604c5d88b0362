#include "gps/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gps/graph_projection.hpp"
#include "gps/io.hpp"
#include "gps/prox.hpp"

namespace gps::diagnostics {

RMatrix realify_matrix(const CMatrix& b) {
  RMatrix out(2 * b.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
      out(i, j) = b(i, j).real();
      out(b.rows() + i, j) = b(i, j).imag();
    }
  }
  return out;
}

namespace {

double col_dot(const RMatrix& m, std::size_t a, std::size_t b) {
  const auto ca = m.col(a), cb = m.col(b);
  double s = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) s += ca[i] * cb[i];
  return s;
}

void rotate_cols(RMatrix& m, std::size_t p, std::size_t q, double c,
                 double s) {
  auto cp = m.col(p), cq = m.col(q);
  for (std::size_t i = 0; i < cp.size(); ++i) {
    const double vp = cp[i], vq = cq[i];
    cp[i] = c * vp - s * vq;
    cq[i] = s * vp + c * vq;
  }
}

// One-sided Jacobi on a tall matrix: orthogonalizes columns of w while
// accumulating the rotations in v. On return w = U diag(sigma) with
// sigma_j = ||w_j||, and the input matrix equals w v^T.
void one_sided_jacobi(RMatrix& w, RMatrix& v) {
  const std::size_t c = w.cols();
  constexpr double kTol = 1e-14;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < c; ++p) {
      for (std::size_t q = p + 1; q < c; ++q) {
        const double app = col_dot(w, p, p);
        const double aqq = col_dot(w, q, q);
        const double apq = col_dot(w, p, q);
        if (std::abs(apq) <= kTol * std::sqrt(app * aqq) || apq == 0.0) {
          continue;
        }
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        rotate_cols(w, p, q, cs, sn);
        rotate_cols(v, p, q, cs, sn);
        rotated = true;
      }
    }
    if (!rotated) return;
  }
  throw NumericalError("jacobi_svd: no convergence within sweep budget");
}

RMatrix transpose(const RMatrix& a) {
  RMatrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  }
  return t;
}

RMatrix identity(std::size_t n) {
  RMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i) e(i, i) = 1.0;
  return e;
}

}  // namespace

Svd jacobi_svd(const RMatrix& a) {
  const bool wide = a.rows() < a.cols();
  RMatrix w = wide ? transpose(a) : a;
  RMatrix v = identity(w.cols());
  one_sided_jacobi(w, v);

  const std::size_t k = w.cols();
  RVector sigma(k);
  RMatrix u(w.rows(), k);
  for (std::size_t j = 0; j < k; ++j) {
    const double s = std::sqrt(col_dot(w, j, j));
    sigma[j] = s;
    if (s > 0.0) {
      for (std::size_t i = 0; i < w.rows(); ++i) u(i, j) = w(i, j) / s;
    }
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sigma[x] > sigma[y];
  });

  Svd out;
  out.values.resize(k);
  RMatrix su(u.rows(), k), sv(v.rows(), k);
  for (std::size_t j = 0; j < k; ++j) {
    out.values[j] = sigma[order[j]];
    std::copy(u.col(order[j]).begin(), u.col(order[j]).end(),
              su.col(j).begin());
    std::copy(v.col(order[j]).begin(), v.col(order[j]).end(),
              sv.col(j).begin());
  }
  if (wide) {
    out.u = std::move(sv);
    out.v = std::move(su);
  } else {
    out.u = std::move(su);
    out.v = std::move(sv);
  }
  return out;
}

namespace {

CVector phases(std::span<const cd> v, bool fill_zero, const char* what) {
  CVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag == 0.0) {
      if (!fill_zero) {
        throw NumericalError(std::string("build_B: zero entry makes the ") +
                             what + " phase undefined");
      }
      out[i] = cd(1.0, 0.0);
    } else {
      out[i] = v[i] / mag;
    }
  }
  return out;
}

CMatrix dense_sampling_matrix(const model::SamplingEnsemble& ensemble) {
  if (ensemble.has_dense()) return ensemble.matrix();
  const CMatrix adj = model::materialize_adjoint(ensemble);  // m x n
  CMatrix a(ensemble.n(), ensemble.m());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      a(i, j) = std::conj(adj(j, i));
    }
  }
  return a;
}

}  // namespace

CMatrix build_B(const model::SamplingEnsemble& ensemble,
                std::span<const cd> x_ref, bool fill_zero_phases) {
  const std::size_t n = ensemble.n(), m = ensemble.m();
  if (x_ref.size() != n) throw DimensionError("build_B: bad x_ref");
  const CMatrix a = dense_sampling_matrix(ensemble);

  CMatrix gram(n, n);
  for (std::size_t k = 0; k < m; ++k) {
    const auto col = a.col(k);
    for (std::size_t j = 0; j < n; ++j) {
      kernels::axpy(std::conj(col[j]), col, gram.col(j));
    }
  }
  for (std::size_t j = 0; j < n; ++j) gram(j, j) += 1.0;
  const CMatrix l = graph::cholesky(gram);

  const CVector px = phases(x_ref, fill_zero_phases, "signal");
  const CVector py =
      phases(ensemble.apply_adjoint(x_ref), fill_zero_phases, "measurement");

  CMatrix b(n, n + m);
  CVector col(n);
  for (std::size_t j = 0; j < n + m; ++j) {
    if (j < n) {
      std::fill(col.begin(), col.end(), cd(0.0, 0.0));
      col[j] = px[j];
    } else {
      const auto acol = a.col(j - n);
      for (std::size_t i = 0; i < n; ++i) col[i] = acol[i] * py[j - n];
    }
    graph::forward_substitute_inplace(l, col);
    std::copy(col.begin(), col.end(), b.col(j).begin());
  }
  return b;
}

SingularSpectrum singular_spectrum(const model::SamplingEnsemble& ensemble,
                                   std::span<const cd> x_ref,
                                   bool fill_zero_phases) {
  if (ensemble.m() < ensemble.n()) {
    throw ConfigError("singular_spectrum requires m >= n");
  }
  const CMatrix b = build_B(ensemble, x_ref, fill_zero_phases);
  Svd svd = jacobi_svd(realify_matrix(b));
  SingularSpectrum out;
  out.values = std::move(svd.values);
  out.vectors = std::move(svd.u);
  return out;
}

namespace {

// Block realification [[Re, -Im], [Im, Re]]; its singular values are those
// of the complex matrix, each twice.
RMatrix block_realify(const CMatrix& a) {
  RMatrix out(2 * a.rows(), 2 * a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const double re = a(i, j).real(), im = a(i, j).imag();
      out(i, j) = re;
      out(a.rows() + i, j) = im;
      out(i, a.cols() + j) = -im;
      out(a.rows() + i, a.cols() + j) = re;
    }
  }
  return out;
}

constexpr double kNonzeroRatio = 1e-10;

double smallest_nonzero(const RVector& desc_values) {
  const double smax = desc_values.empty() ? 0.0 : desc_values.front();
  double smin = 0.0;
  for (double v : desc_values) {
    if (v > kNonzeroRatio * smax) smin = v;
  }
  return smin;
}

}  // namespace

DiagnosticsReport contraction_constants(const model::SamplingEnsemble& ensemble,
                                        std::span<const cd> x_ref,
                                        bool fill_zero_phases) {
  DiagnosticsReport rep;
  const CMatrix a = dense_sampling_matrix(ensemble);

  const Svd sa = jacobi_svd(block_realify(a));
  rep.s_max_a = sa.values.empty() ? 0.0 : sa.values.front();
  rep.s_min_a = smallest_nonzero(sa.values);
  rep.delta1 = 1.0 / std::sqrt(1.0 + rep.s_min_a * rep.s_min_a);

  const CVector py =
      phases(ensemble.apply_adjoint(x_ref), fill_zero_phases, "measurement");
  CMatrix aoy(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto src = a.col(j);
    auto dst = aoy.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) dst[i] = src[i] * py[j];
  }
  const Svd sg = jacobi_svd(realify_matrix(aoy));
  rep.delta2 =
      smallest_nonzero(sg.values) / (1.0 + rep.s_max_a * rep.s_max_a);

  const SingularSpectrum spec =
      singular_spectrum(ensemble, x_ref, fill_zero_phases);
  rep.sigma2 = spec.values.size() > 1 ? spec.values[1] : 0.0;

  const double s2 = rep.sigma2 * rep.sigma2;
  const double d1 = rep.delta1 * rep.delta1;
  rep.beta_tilde = std::sqrt(std::max(s2 + (1.0 - s2) * d1, s2));
  rep.t_max = t_max_from_beta_tilde(rep.beta_tilde);

  rep.ranges_ok = rep.delta1 > 0.0 && rep.delta1 < 1.0 && rep.delta2 >= 0.0 &&
                  rep.delta2 < 1.0 && rep.sigma2 >= 0.0 &&
                  rep.sigma2 < 1.0 - 1e-8 && rep.t_max > 0.0 &&
                  rep.t_max < 1.0;
  if (!rep.ranges_ok) {
    rep.note = "constants outside the open ranges of the local theory";
  }
  return rep;
}

double t_max_from_beta_tilde(double beta_tilde) {
  const double bt2 = beta_tilde * beta_tilde;
  return 2.0 * (1.0 - bt2) / (2.0 - bt2);
}

double rgps_rate_bound(double beta_tilde, double t) {
  const double ac = 1.0 - beta_tilde * beta_tilde;
  if (!(ac > 0.0)) throw ConfigError("rgps_rate_bound: beta_tilde >= 1");
  return std::sqrt((1.0 - t) * (1.0 - t) + t * t / ac);
}

std::string DiagnosticsReport::to_json() const {
  auto f = io::format_double;
  std::string s = "{";
  s += "\"delta1\": " + f(delta1);
  s += ", \"delta2\": " + f(delta2);
  s += ", \"sigma2\": " + f(sigma2);
  s += ", \"beta_tilde\": " + f(beta_tilde);
  s += ", \"t_max\": " + f(t_max);
  s += ", \"gamma_fit\": " + (gamma_fit ? f(*gamma_fit) : "null");
  s += ", \"s_min_A\": " + f(s_min_a);
  s += ", \"s_max_A\": " + f(s_max_a);
  s += ", \"ranges_ok\": " + std::string(ranges_ok ? "true" : "false");
  s += "}";
  return s;
}

std::string DiagnosticsReport::csv_header() {
  return "delta1,delta2,sigma2,beta_tilde,t_max,gamma_fit,s_min_A,s_max_A,"
         "ranges_ok";
}

std::string DiagnosticsReport::to_csv_row() const {
  auto f = io::format_double;
  std::string s = f(delta1) + "," + f(delta2) + "," + f(sigma2) + "," +
                  f(beta_tilde) + "," + f(t_max) + ",";
  s += gamma_fit ? f(*gamma_fit) : std::string("");
  s += "," + f(s_min_a) + "," + f(s_max_a) + "," + (ranges_ok ? "1" : "0");
  return s;
}

RateFit fit_rate(const solvers::Trace& trace) {
  std::vector<std::pair<double, double>> pts;  // (iter, log rel_err)
  for (const auto& r : trace.records) {
    if (std::isfinite(r.rel_err) && r.rel_err > 1e-14) {
      pts.emplace_back(static_cast<double>(r.iter), std::log(r.rel_err));
    }
  }
  if (pts.size() < 10) {
    throw ConfigError("fit_rate: need at least 10 records above 1e-14");
  }
  const std::size_t start = pts.size() / 2;  // tail half
  const std::size_t k = pts.size() - start;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = start; i < pts.size(); ++i) {
    mx += pts[i].first;
    my += pts[i].second;
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = start; i < pts.size(); ++i) {
    const double dx = pts[i].first - mx, dy = pts[i].second - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  if (sxx == 0.0 || syy == 0.0) {
    fit.degenerate = true;
    fit.gamma = 1.0;
    return fit;
  }
  fit.gamma = std::exp(sxy / sxx);
  return fit;
}

double fixed_point_residual(const solvers::SolverState& state,
                            const graph::GraphProjector& projector,
                            const model::ProblemInstance& instance,
                            const model::PriorSpec& prior) {
  const std::size_t n = state.x.size(), m = state.y.size();
  CVector zx(n), zy(m);
  for (std::size_t i = 0; i < n; ++i) zx[i] = state.x[i] + state.lambda[i];
  for (std::size_t i = 0; i < m; ++i) zy[i] = state.y[i] + state.nu[i];

  const CVector px = prox::prox_prior(zx, prior);
  const CVector py = prox::prox_amplitude(zy, instance.amplitudes);

  CVector rx(n), ry(m);
  for (std::size_t i = 0; i < n; ++i) rx[i] = 2.0 * px[i] - zx[i];
  for (std::size_t i = 0; i < m; ++i) ry[i] = 2.0 * py[i] - zy[i];

  CVector mx, my;
  projector.project(rx, ry, mx, my);

  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(mx[i] - px[i]);
  for (std::size_t i = 0; i < m; ++i) acc += std::norm(my[i] - py[i]);
  return std::sqrt(acc);
}

}  // namespace gps::diagnostics
