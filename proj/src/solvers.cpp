#include "gps/solvers.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "gps/io.hpp"

namespace gps::solvers {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::gps: return "gps";
    case Algorithm::rgps: return "rgps";
    case Algorithm::dr: return "dr";
    case Algorithm::rdr: return "rdr";
    case Algorithm::gps_tv: return "gps_tv";
    case Algorithm::hio: return "hio";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "gps") return Algorithm::gps;
  if (name == "rgps") return Algorithm::rgps;
  if (name == "dr") return Algorithm::dr;
  if (name == "rdr") return Algorithm::rdr;
  if (name == "gps_tv" || name == "gps-tv") return Algorithm::gps_tv;
  if (name == "hio") return Algorithm::hio;
  throw ConfigError("unknown algorithm: " + name);
}

void Trace::export_csv(const std::string& path) const {
  std::string buf = "iter,rel_err,residual,seconds\n";
  for (const TraceRecord& r : records) {
    buf += std::to_string(r.iter);
    buf += ',';
    buf += io::format_double(r.rel_err);
    buf += ',';
    buf += io::format_double(r.residual);
    buf += ',';
    buf += io::format_double(r.seconds);
    buf += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io::IoError(io::IoError::Kind::open, "cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io::IoError(io::IoError::Kind::write, "write failed " + path);
}

namespace {

CVector random_signal(std::size_t n, model::FieldKind field,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double cscale = std::numbers::sqrt2 / 2.0;
  CVector x(n);
  if (field == model::FieldKind::real) {
    for (auto& z : x) z = cd(gauss(rng), 0.0);
  } else {
    for (auto& z : x) {
      const double re = gauss(rng) * cscale;
      const double im = gauss(rng) * cscale;
      z = cd(re, im);
    }
  }
  return x;
}

graph::TvOperator tv_operator_for(const model::SamplingEnsemble& ensemble) {
  const auto& st = ensemble.structure();
  if (st.kind != model::Structure::Kind::oversampled_fourier) {
    throw ConfigError("gps_tv requires an oversampled-Fourier ensemble");
  }
  return graph::TvOperator{static_cast<std::size_t>(st.height),
                           static_cast<std::size_t>(st.width)};
}

}  // namespace

SolverState init_state(const model::ProblemInstance& instance,
                       const SolverConfig& config, std::uint64_t seed) {
  SolverState st;
  st.x = random_signal(instance.ensemble.n(), instance.ensemble.field(), seed);
  st.y = instance.ensemble.apply_adjoint(st.x);
  st.lambda.assign(st.x.size(), cd(0.0, 0.0));
  st.nu.assign(st.y.size(), cd(0.0, 0.0));
  st.z_dr = st.y;
  if (config.algorithm == Algorithm::gps_tv) {
    const graph::TvOperator tv = tv_operator_for(instance.ensemble);
    st.y2 = tv.apply(st.x);
    st.nu2.assign(st.y2.size(), cd(0.0, 0.0));
  }
  return st;
}

RangeProjector RangeProjector::build(const model::SamplingEnsemble& ensemble) {
  if (ensemble.m() < ensemble.n()) {
    throw ConfigError("DR range projector requires m >= n");
  }
  RangeProjector r;
  r.ensemble_ = &ensemble;
  if (ensemble.structure().kind != model::Structure::Kind::generic) {
    r.iso_scale_ = ensemble.structure().scale;
    return r;
  }
  const CMatrix& a = ensemble.matrix();
  const std::size_t n = a.rows();
  CMatrix gram(n, n);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const auto col = a.col(k);
    for (std::size_t j = 0; j < n; ++j) {
      kernels::axpy(std::conj(col[j]), col, gram.col(j));
    }
  }
  r.chol_ = graph::cholesky(gram);
  return r;
}

CVector RangeProjector::recover_x(std::span<const cd> v) const {
  CVector x = ensemble_->apply_forward(v);
  if (iso_scale_ > 0.0) {
    const double s = 1.0 / iso_scale_;
    for (auto& z : x) z *= s;
  } else {
    graph::solve_factored_inplace(chol_, x);
  }
  return x;
}

CVector RangeProjector::apply(std::span<const cd> v) const {
  return ensemble_->apply_adjoint(recover_x(v));
}

void rgps_step(SolverState& state, const graph::GraphProjector& projector,
               const model::ProblemInstance& instance,
               const model::PriorSpec& prior, double t) {
  const std::size_t n = state.x.size(), m = state.y.size();
  CVector c(n), d(m);
  for (std::size_t i = 0; i < n; ++i) c[i] = state.x[i] - state.lambda[i];
  for (std::size_t i = 0; i < m; ++i) d[i] = state.y[i] - state.nu[i];

  CVector xh, yh;
  projector.project_relaxed(t, c, d, xh, yh);

  CVector xin(n), yin(m);
  for (std::size_t i = 0; i < n; ++i) xin[i] = xh[i] + state.lambda[i];
  for (std::size_t i = 0; i < m; ++i) yin[i] = yh[i] + state.nu[i];

  CVector xnew = prox::prox_prior(xin, prior);
  CVector ynew = prox::prox_amplitude(yin, instance.amplitudes);

  for (std::size_t i = 0; i < n; ++i) state.lambda[i] += xh[i] - xnew[i];
  for (std::size_t i = 0; i < m; ++i) state.nu[i] += yh[i] - ynew[i];
  state.x = std::move(xnew);
  state.y = std::move(ynew);
}

void gps_step(SolverState& state, const graph::GraphProjector& projector,
              const model::ProblemInstance& instance,
              const model::PriorSpec& prior) {
  rgps_step(state, projector, instance, prior, 0.0);
}

void rdr_step(CVector& z_dr, const RangeProjector& range,
              std::span<const double> b, double t) {
  const CVector p = prox::prox_amplitude(z_dr, b);
  CVector r(z_dr.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 2.0 * p[i] - z_dr[i];
  CVector q = range.apply(r);
  if (t != 0.0) {
    CVector mixed(q.size());
    kernels::mix(t, r, q, mixed);
    q = std::move(mixed);
  }
  for (std::size_t i = 0; i < z_dr.size(); ++i) z_dr[i] += q[i] - p[i];
}

void dr_step(CVector& z_dr, const RangeProjector& range,
             std::span<const double> b) {
  rdr_step(z_dr, range, b, 0.0);
}

void gps_tv_step(SolverState& state, const model::SamplingEnsemble& ensemble,
                 const graph::TvOperator& tv,
                 const model::ProblemInstance& instance,
                 const model::PriorSpec& prior, double t, double tv_weight,
                 double cg_tol, int cg_max_iters) {
  const std::size_t n = state.x.size(), m = state.y.size();
  const std::size_t k = state.y2.size();
  CVector c(n), d1(m), d2(k);
  for (std::size_t i = 0; i < n; ++i) c[i] = state.x[i] - state.lambda[i];
  for (std::size_t i = 0; i < m; ++i) d1[i] = state.y[i] - state.nu[i];
  for (std::size_t i = 0; i < k; ++i) d2[i] = state.y2[i] - state.nu2[i];

  graph::TvProjection proj =
      graph::project_tv(ensemble, tv, c, d1, d2, cg_tol, cg_max_iters);
  CVector xh = std::move(proj.x), y1h = std::move(proj.y1),
          y2h = std::move(proj.y2);
  if (t != 0.0) {
    CVector tmp(n);
    kernels::mix(t, c, xh, tmp);
    xh = tmp;
    tmp.resize(m);
    kernels::mix(t, d1, y1h, tmp);
    y1h = tmp;
    tmp.resize(k);
    kernels::mix(t, d2, y2h, tmp);
    y2h = tmp;
  }

  CVector xin(n), y1in(m), y2in(k);
  for (std::size_t i = 0; i < n; ++i) xin[i] = xh[i] + state.lambda[i];
  for (std::size_t i = 0; i < m; ++i) y1in[i] = y1h[i] + state.nu[i];
  for (std::size_t i = 0; i < k; ++i) y2in[i] = y2h[i] + state.nu2[i];

  CVector xnew = prox::prox_prior(xin, prior);
  CVector y1new = prox::prox_amplitude(y1in, instance.amplitudes);
  CVector y2new =
      tv_weight > 0.0 ? prox::prox_l1(y2in, tv_weight) : std::move(y2in);

  for (std::size_t i = 0; i < n; ++i) state.lambda[i] += xh[i] - xnew[i];
  for (std::size_t i = 0; i < m; ++i) state.nu[i] += y1h[i] - y1new[i];
  for (std::size_t i = 0; i < k; ++i) state.nu2[i] += y2h[i] - y2new[i];
  state.x = std::move(xnew);
  state.y = std::move(y1new);
  state.y2 = std::move(y2new);
}

namespace {

void validate(const model::ProblemInstance& instance,
              const SolverConfig& config, const model::PriorSpec& prior) {
  switch (config.algorithm) {
    case Algorithm::dr:
    case Algorithm::rdr:
      if (prior.kind != model::PriorSpec::Kind::none) {
        throw ConfigError("DR family supports no prior (g = 0)");
      }
      if (instance.ensemble.m() < instance.ensemble.n()) {
        throw ConfigError("DR family requires m >= n");
      }
      break;
    case Algorithm::gps_tv:
      tv_operator_for(instance.ensemble);
      break;
    default:
      break;
  }
  if (config.algorithm == Algorithm::rgps || config.algorithm == Algorithm::rdr) {
    if (!(config.t > 0.0 && config.t < 1.0)) {
      throw ConfigError("robust variants require t in (0, 1)");
    }
  }
  if (config.stop_rule == StopRule::oracle_rel_err && !instance.truth) {
    throw ConfigError("oracle stop rule requires ground truth");
  }
  if (config.max_iters < 0) throw ConfigError("max_iters must be >= 0");
}

double effective_t(const SolverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::gps:
    case Algorithm::dr:
      return 0.0;  // exact projection variants
    default:
      return config.t;
  }
}

}  // namespace

RunResult run(const model::ProblemInstance& instance,
              const SolverConfig& config, const model::PriorSpec& prior,
              const SolverState* initial) {
  validate(instance, config, prior);
  const auto t0 = std::chrono::steady_clock::now();
  const double t = effective_t(config);

  RunResult result;
  Trace& trace = result.trace;

  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  auto record = [&](int iter, const CVector& x) {
    TraceRecord r;
    r.iter = iter;
    r.rel_err = instance.truth
                    ? model::rel_err(x, *instance.truth)
                    : std::numeric_limits<double>::quiet_NaN();
    r.residual = model::residual(instance.ensemble, x, instance.amplitudes);
    r.seconds = seconds();
    trace.records.push_back(r);
    return config.stop_rule == StopRule::oracle_rel_err ? r.rel_err
                                                        : r.residual;
  };

  if (config.algorithm == Algorithm::hio) {
    const BVector& mask = prior.support;
    trace.status = Trace::Status::max_iters;
    result.x = run_hio(instance.ensemble, instance.amplitudes, mask,
                       config.hio_beta, config.max_iters, config.seed,
                       [&](int iter, const CVector& x, double) {
                         record(iter, x);
                       });
    result.state.x = result.x;
    return result;
  }

  SolverState st =
      initial ? *initial : init_state(instance, config, config.seed);

  const bool dr_family =
      config.algorithm == Algorithm::dr || config.algorithm == Algorithm::rdr;
  const bool tv = config.algorithm == Algorithm::gps_tv;

  std::optional<graph::GraphProjector> projector;
  std::optional<RangeProjector> range;
  graph::TvOperator tv_op;
  if (dr_family) {
    range = RangeProjector::build(instance.ensemble);
  } else if (tv) {
    tv_op = tv_operator_for(instance.ensemble);
  } else {
    projector = graph::GraphProjector::build(instance.ensemble);
  }

  auto current_x = [&]() -> CVector {
    if (dr_family) {
      return range->recover_x(
          prox::prox_amplitude(st.z_dr, instance.amplitudes));
    }
    return st.x;
  };

  CVector x = current_x();
  double metric = record(0, x);
  trace.status = Trace::Status::max_iters;
  if (metric < config.tol) {
    trace.status = Trace::Status::converged;
    result.x = std::move(x);
    result.state = std::move(st);
    return result;
  }

  for (int k = 1; k <= config.max_iters; ++k) {
    try {
      switch (config.algorithm) {
        case Algorithm::gps:
        case Algorithm::rgps:
          rgps_step(st, *projector, instance, prior, t);
          break;
        case Algorithm::dr:
        case Algorithm::rdr:
          rdr_step(st.z_dr, *range, instance.amplitudes, t);
          break;
        case Algorithm::gps_tv:
          gps_tv_step(st, instance.ensemble, tv_op, instance, prior, t,
                      config.tv_weight, config.cg_tol, config.cg_max_iters);
          break;
        case Algorithm::hio:
          break;  // handled above
      }
    } catch (const NumericalError& e) {
      trace.status = Trace::Status::error;
      trace.message = e.what();
      break;
    }
    x = current_x();
    metric = record(k, x);
    if (metric < config.tol) {
      trace.status = Trace::Status::converged;
      break;
    }
  }

  result.x = current_x();
  result.state = std::move(st);
  return result;
}

CVector run_hio(const model::SamplingEnsemble& ensemble,
                std::span<const double> b, const BVector& support_mask,
                double beta, int iters, std::uint64_t seed,
                const HioCallback& callback,
                std::span<const double> init_image) {
  const auto& st = ensemble.structure();
  if (st.kind != model::Structure::Kind::oversampled_fourier) {
    throw ConfigError("run_hio requires an oversampled-Fourier ensemble");
  }
  if (b.size() != ensemble.m()) throw DimensionError("run_hio: bad b");
  const std::size_t h = st.height, w = st.width;
  const std::size_t bh = h * st.pad_factor, bw = w * st.pad_factor;
  const std::size_t big = bh * bw;
  if (!support_mask.empty() && support_mask.size() != h * w) {
    throw DimensionError("run_hio: bad support mask");
  }
  const auto masked = [&](std::size_t r, std::size_t c) {
    return r < h && c < w &&
           (support_mask.empty() || support_mask[r * w + c] != 0);
  };
  const double bnorm = norm(b);

  RVector g(big, 0.0);
  if (!init_image.empty()) {
    if (init_image.size() != h * w) {
      throw DimensionError("run_hio: bad init image");
    }
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        g[r * bw + c] = init_image[r * w + c];
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t r = 0; r < bh; ++r) {
      for (std::size_t c = 0; c < bw; ++c) {
        if (masked(r, c)) g[r * bw + c] = gauss(rng);
      }
    }
  }

  RVector gp(big, 0.0);
  CVector grid(big);
  const double inv = 1.0 / static_cast<double>(big);
  auto extract = [&](const RVector& img) {
    CVector x(h * w);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) x[r * w + c] = img[r * bw + c];
    }
    return x;
  };

  for (int k = 1; k <= iters; ++k) {
    for (std::size_t i = 0; i < big; ++i) grid[i] = g[i];
    model::dft_2d(grid, bh, bw, -1);
    for (std::size_t i = 0; i < big; ++i) {
      const double mag = std::abs(grid[i]);
      grid[i] = mag > 0.0 ? grid[i] * (b[i] / mag) : cd(0.0, 0.0);
    }
    model::dft_2d(grid, bh, bw, +1);
    for (std::size_t i = 0; i < big; ++i) gp[i] = grid[i].real() * inv;

    for (std::size_t r = 0; r < bh; ++r) {
      for (std::size_t c = 0; c < bw; ++c) {
        const std::size_t i = r * bw + c;
        if (masked(r, c) && gp[i] >= 0.0) {
          g[i] = gp[i];
        } else {
          g[i] -= beta * gp[i];
        }
      }
    }
    if (callback) {
      const CVector est = extract(gp);
      double res = 0.0;
      const RVector mags = model::measure(ensemble, est);
      for (std::size_t i = 0; i < big; ++i) {
        res += (mags[i] - b[i]) * (mags[i] - b[i]);
      }
      callback(k, est, bnorm > 0.0 ? std::sqrt(res) / bnorm : std::sqrt(res));
    }
  }
  return extract(iters > 0 ? gp : g);
}

}  // namespace gps::solvers
