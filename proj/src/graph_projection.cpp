#include "gps/graph_projection.hpp"

#include <cmath>
#include <string>

namespace gps::graph {

namespace stats {
std::atomic<std::uint64_t> triangular_solves{0};
}

CMatrix cholesky(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("cholesky: not square");
  const std::size_t n = m.rows();
  CMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j).real();
    for (std::size_t k = 0; k < j; ++k) {
      pivot -= std::norm(l(j, k));
    }
    if (!(pivot > 0.0)) {
      throw NumericalError("cholesky: matrix not positive definite (pivot " +
                           std::to_string(pivot) + " at " + std::to_string(j) +
                           ")");
    }
    const double djj = std::sqrt(pivot);
    l(j, j) = djj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cd s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) {
        s -= l(i, k) * std::conj(l(j, k));
      }
      l(i, j) = s / djj;
    }
  }
  return l;
}

void forward_substitute_inplace(const CMatrix& l, CVector& rhs) {
  const std::size_t n = l.rows();
  if (rhs.size() != n) throw DimensionError("forward_substitute: bad rhs");
  for (std::size_t k = 0; k < n; ++k) {
    rhs[k] /= l(k, k);
    const cd zk = rhs[k];
    if (k + 1 < n) {
      kernels::axpy(-zk, l.col(k).subspan(k + 1),
                    std::span<cd>(rhs).subspan(k + 1));
    }
  }
}

void solve_factored_inplace(const CMatrix& l, CVector& rhs) {
  const std::size_t n = l.rows();
  if (rhs.size() != n) throw DimensionError("solve_factored: bad rhs");
  forward_substitute_inplace(l, rhs);
  // backward: L^* x = z; row k of L^* is the conjugated column k of L
  for (std::size_t k = n; k-- > 0;) {
    cd s = rhs[k];
    if (k + 1 < n) {
      s -= kernels::dot_conj(l.col(k).subspan(k + 1),
                             std::span<const cd>(rhs).subspan(k + 1));
    }
    rhs[k] = s / l(k, k);
  }
  stats::triangular_solves.fetch_add(1, std::memory_order_relaxed);
}

CVector solve_factored(const CMatrix& l, std::span<const cd> rhs) {
  CVector x(rhs.begin(), rhs.end());
  solve_factored_inplace(l, x);
  return x;
}

CgResult conjugate_gradient(const LinOp& apply, std::span<const cd> rhs,
                            double tol, int max_iter) {
  CgResult res;
  res.x.assign(rhs.size(), cd(0.0, 0.0));
  const double rhs_norm = norm(rhs);
  if (rhs_norm == 0.0) {
    res.converged = true;
    return res;
  }
  CVector r(rhs.begin(), rhs.end());
  CVector p = r;
  CVector ap;
  double rs = kernels::norm2_sq(r);
  for (int k = 1; k <= max_iter; ++k) {
    apply(p, ap);
    const double curvature = kernels::dot_conj(p, ap).real();
    if (!(curvature > 0.0)) {
      throw NumericalError("conjugate_gradient: breakdown, curvature " +
                           std::to_string(curvature));
    }
    const double alpha = rs / curvature;
    kernels::axpy(alpha, p, res.x);
    kernels::axpy(-alpha, ap, r);
    const double rs_new = kernels::norm2_sq(r);
    res.iterations = k;
    res.rel_residual = std::sqrt(rs_new) / rhs_norm;
    if (res.rel_residual <= tol) {
      res.converged = true;
      return res;
    }
    const double beta = rs_new / rs;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    rs = rs_new;
  }
  return res;
}

namespace {

// I + A A^* via rank-one column updates.
CMatrix gram_tall(const CMatrix& a) {
  const std::size_t n = a.rows();
  CMatrix g(n, n);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const auto col = a.col(k);
    for (std::size_t j = 0; j < n; ++j) {
      kernels::axpy(std::conj(col[j]), col, g.col(j));
    }
  }
  for (std::size_t j = 0; j < n; ++j) g(j, j) += 1.0;
  return g;
}

// I + A^* A via pairwise column dots.
CMatrix gram_wide(const CMatrix& a) {
  const std::size_t m = a.cols();
  CMatrix g(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      g(i, j) = kernels::dot_conj(a.col(i), a.col(j));
    }
    g(j, j) += 1.0;
  }
  return g;
}

}  // namespace

GraphProjector GraphProjector::build(const model::SamplingEnsemble& ensemble) {
  Branch branch;
  if (ensemble.structure().kind != model::Structure::Kind::generic) {
    branch = Branch::isometric;
  } else if (ensemble.m() >= ensemble.n()) {
    branch = Branch::tall;
  } else {
    branch = Branch::wide;
  }
  return build(ensemble, branch);
}

GraphProjector GraphProjector::build(const model::SamplingEnsemble& ensemble,
                                     Branch forced) {
  GraphProjector p;
  p.ensemble_ = &ensemble;
  p.branch_ = forced;
  switch (forced) {
    case Branch::isometric: {
      if (ensemble.structure().kind == model::Structure::Kind::generic) {
        throw ConfigError("isometric projector requires a scaled isometry");
      }
      p.iso_scale_ = ensemble.structure().scale;
      break;
    }
    case Branch::tall:
      p.factor_ = cholesky(gram_tall(ensemble.matrix()));
      break;
    case Branch::wide:
      p.factor_ = cholesky(gram_wide(ensemble.matrix()));
      break;
  }
  return p;
}

void GraphProjector::project(std::span<const cd> c, std::span<const cd> d,
                             CVector& x, CVector& y) const {
  const auto& ens = *ensemble_;
  if (c.size() != ens.n() || d.size() != ens.m()) {
    throw DimensionError("project: dimension mismatch");
  }
  switch (branch_) {
    case Branch::isometric: {
      x = ens.apply_forward(d);
      const double s = 1.0 / (1.0 + iso_scale_);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] + c[i]) * s;
      y = ens.apply_adjoint(x);
      break;
    }
    case Branch::tall: {
      x.assign(c.begin(), c.end());
      forward_apply_add(ens.matrix(), d, x);
      solve_factored_inplace(factor_, x);
      y = ens.apply_adjoint(x);
      break;
    }
    case Branch::wide: {
      // w = c + A d;  y = (I + A^* A)^{-1} A^* w;  x = w - A y
      CVector w(c.begin(), c.end());
      forward_apply_add(ens.matrix(), d, w);
      y = ens.apply_adjoint(w);
      solve_factored_inplace(factor_, y);
      x = std::move(w);
      for (std::size_t j = 0; j < ens.m(); ++j) {
        kernels::axpy(-y[j], ens.matrix().col(j), x);
      }
      break;
    }
  }
}

void GraphProjector::project_relaxed(double t, std::span<const cd> c,
                                     std::span<const cd> d, CVector& x,
                                     CVector& y) const {
  if (!(t >= 0.0 && t < 1.0)) {
    throw ConfigError("project_relaxed: t must lie in [0, 1)");
  }
  if (t == 0.0) {
    project(c, d, x, y);
    return;
  }
  CVector px, py;
  project(c, d, px, py);
  x.resize(c.size());
  y.resize(d.size());
  kernels::mix(t, c, px, x);
  kernels::mix(t, d, py, y);
}

CVector TvOperator::apply(std::span<const cd> x) const {
  if (x.size() != input_size()) throw DimensionError("tv apply: bad input");
  CVector out(output_size(), cd(0.0, 0.0));
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c + 1 < w; ++c) {
      out[r * w + c] = x[r * w + c + 1] - x[r * w + c];
    }
  }
  const std::size_t hw = h * w;
  for (std::size_t r = 0; r + 1 < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      out[hw + r * w + c] = x[(r + 1) * w + c] - x[r * w + c];
    }
  }
  return out;
}

CVector TvOperator::adjoint(std::span<const cd> z) const {
  if (z.size() != output_size()) throw DimensionError("tv adjoint: bad input");
  CVector out(input_size(), cd(0.0, 0.0));
  const std::size_t hw = h * w;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c + 1 < w; ++c) {
      const cd v = z[r * w + c];
      out[r * w + c + 1] += v;
      out[r * w + c] -= v;
    }
  }
  for (std::size_t r = 0; r + 1 < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const cd v = z[hw + r * w + c];
      out[(r + 1) * w + c] += v;
      out[r * w + c] -= v;
    }
  }
  return out;
}

TvProjection project_tv(const model::SamplingEnsemble& ensemble,
                        const TvOperator& tv, std::span<const cd> c,
                        std::span<const cd> d1, std::span<const cd> d2,
                        double cg_tol, int cg_max_iter) {
  if (ensemble.structure().kind == model::Structure::Kind::generic) {
    throw ConfigError("project_tv requires a scaled isometry (A A^* = l I)");
  }
  if (c.size() != ensemble.n() || d1.size() != ensemble.m() ||
      d2.size() != tv.output_size() || tv.input_size() != ensemble.n()) {
    throw DimensionError("project_tv: dimension mismatch");
  }
  const double l = ensemble.structure().scale;

  CVector rhs = ensemble.apply_forward(d1);
  const CVector dtd2 = tv.adjoint(d2);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += c[i] + dtd2[i];

  const LinOp apply = [&](std::span<const cd> v, CVector& out) {
    out = tv.adjoint(tv.apply(v));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (1.0 + l) * v[i];
  };
  CgResult cg = conjugate_gradient(apply, rhs, cg_tol, cg_max_iter);
  if (!cg.converged) {
    throw NumericalError("project_tv: CG did not converge, residual " +
                         std::to_string(cg.rel_residual));
  }
  TvProjection out;
  out.y1 = ensemble.apply_adjoint(cg.x);
  out.y2 = tv.apply(cg.x);
  out.x = std::move(cg.x);
  out.cg_iterations = cg.iterations;
  return out;
}

}  // namespace gps::graph
