#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "gps/graph_projection.hpp"
#include "gps/model.hpp"
#include "gps/prox.hpp"

namespace gps::solvers {

enum class Algorithm { gps, rgps, dr, rdr, gps_tv, hio };
enum class StopRule { oracle_rel_err, residual };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::gps;
  double t = 0.1;          // relaxation; forced to 0 for gps/dr
  int max_iters = 5000;
  double tol = 1e-3;
  StopRule stop_rule = StopRule::residual;
  double tv_weight = 1.0;  // l1 weight on the TV block
  double hio_beta = 1.0;
  std::uint64_t seed = 0;
  double cg_tol = 1e-8;    // three-block projection solve
  int cg_max_iters = 500;
};

struct SolverState {
  // GPS family primal/dual pairs; y/nu double as the first TV block.
  CVector x, y, lambda, nu;
  // measurement-space DR iterate
  CVector z_dr;
  // second TV block
  CVector y2, nu2;
};

struct TraceRecord {
  int iter = 0;
  double rel_err = 0.0;  // NaN when no ground truth
  double residual = 0.0;
  double seconds = 0.0;
};

struct Trace {
  enum class Status { converged, max_iters, error };
  std::vector<TraceRecord> records;
  Status status = Status::max_iters;
  std::string message;

  int terminal_iter() const {
    return records.empty() ? 0 : records.back().iter;
  }
  /// CSV export: iter,rel_err,residual,seconds
  void export_csv(const std::string& path) const;
};

struct RunResult {
  CVector x;
  Trace trace;
  SolverState state;
};

/// x0 random Gaussian (complex Gaussian on complex ensembles), y0 = A^* x0,
/// duals zero; z_dr0 = y0. For gps_tv additionally y2 = D x0, nu2 = 0.
SolverState init_state(const model::ProblemInstance& instance,
                       const SolverConfig& config, std::uint64_t seed);

/// Range-space machinery for the measurement-space DR iteration:
/// application of A^* (A A^*)^{-1} A and the x recovery map. Requires
/// m >= n.
class RangeProjector {
public:
  static RangeProjector build(const model::SamplingEnsemble& ensemble);
  /// A^* (A A^*)^{-1} A v
  CVector apply(std::span<const cd> v) const;
  /// (A A^*)^{-1} A v
  CVector recover_x(std::span<const cd> v) const;

private:
  const model::SamplingEnsemble* ensemble_ = nullptr;
  CMatrix chol_;        // factor of A A^* (empty on the isometric path)
  double iso_scale_ = 0.0;
};

/// One GPS sweep: graph projection of (x - lambda, y - nu), prox pair,
/// dual updates.
void gps_step(SolverState& state, const graph::GraphProjector& projector,
              const model::ProblemInstance& instance,
              const model::PriorSpec& prior);

/// GPS with the relaxed projection t I + (1 - t) Pi. t = 0 reproduces
/// gps_step bit for bit.
void rgps_step(SolverState& state, const graph::GraphProjector& projector,
               const model::ProblemInstance& instance,
               const model::PriorSpec& prior, double t);

/// z <- z + Pi_range(2 prox_f(z) - z) - prox_f(z).
void dr_step(CVector& z_dr, const RangeProjector& range,
             std::span<const double> b);

/// dr_step with Pi_range replaced by t I + (1 - t) Pi_range; t = 0
/// reproduces dr_step bit for bit.
void rdr_step(CVector& z_dr, const RangeProjector& range,
              std::span<const double> b, double t);

/// One three-block sweep: relaxed graph projection via CG, prox triple
/// (prior on x, amplitude on y1, l1 shrinkage on y2), dual updates.
void gps_tv_step(SolverState& state, const model::SamplingEnsemble& ensemble,
                 const graph::TvOperator& tv,
                 const model::ProblemInstance& instance,
                 const model::PriorSpec& prior, double t, double tv_weight,
                 double cg_tol, int cg_max_iters);

/// Iterate the configured algorithm until the stop-rule metric drops below
/// tol or max_iters is reached, recording a trace entry every iteration.
/// Numerical failures mid-run terminate with Trace::Status::error;
/// inconsistent configurations throw ConfigError up front.
RunResult run(const model::ProblemInstance& instance,
              const SolverConfig& config,
              const model::PriorSpec& prior = model::PriorSpec::none(),
              const SolverState* initial = nullptr);

using HioCallback =
    std::function<void(int iter, const CVector& x, double fourier_residual)>;

/// Fienup hybrid input-output on an oversampled-Fourier ensemble:
/// Fourier-domain modulus replacement, image-domain constraint
/// (support and real nonnegative), feedback beta elsewhere. Returns the
/// object-domain estimate restricted to the support box. init_image
/// (length n, placed in the support box) overrides the seeded random
/// start.
CVector run_hio(const model::SamplingEnsemble& ensemble,
                std::span<const double> b, const BVector& support_mask,
                double beta, int iters, std::uint64_t seed,
                const HioCallback& callback = {},
                std::span<const double> init_image = {});

}  // namespace gps::solvers
