#pragma once

#include <optional>
#include <string>

#include "gps/linalg.hpp"
#include "gps/model.hpp"
#include "gps/solvers.hpp"

namespace gps::diagnostics {

/// Stacked realification [Re(B); Im(B)] of an n x k complex matrix.
RMatrix realify_matrix(const CMatrix& b);

struct Svd {
  RVector values;  // descending
  RMatrix u;       // left singular vectors (columns)
  RMatrix v;       // right singular vectors (columns)
};

/// One-sided Jacobi SVD of a dense real matrix. Accurate at desk scale;
/// performance is a non-goal here.
Svd jacobi_svd(const RMatrix& a);

/// B = C Omega with C = [L^{-1}, L^{-1} A] from the Cholesky factor of
/// I + A A^* and Omega the diagonal phases of x_ref and A^* x_ref.
/// B B^* = I. Zero entries in either phase source are an error unless
/// fill_zero_phases substitutes phase 1 (outside the theory's assumptions).
CMatrix build_B(const model::SamplingEnsemble& ensemble,
                std::span<const cd> x_ref, bool fill_zero_phases = false);

struct SingularSpectrum {
  RVector values;   // sigma_1 >= ... >= sigma_{2n}
  RMatrix vectors;  // matching left singular vectors of realify_matrix(B)
};

/// Singular structure of the realified B: sigma_1 = 1, sigma_{2n} = 0 and
/// the pairing sigma_i^2 + sigma_{2n+1-i}^2 = 1.
SingularSpectrum singular_spectrum(const model::SamplingEnsemble& ensemble,
                                   std::span<const cd> x_ref,
                                   bool fill_zero_phases = false);

struct DiagnosticsReport {
  double delta1 = 0.0;      // 1 / sqrt(1 + s_min(A)^2)
  double delta2 = 0.0;      // s_min(G(A Omega_y)) / (1 + s_max(A)^2)
  double sigma2 = 0.0;      // second singular value of realified B
  double beta_tilde = 0.0;  // sqrt(max(sigma2^2 + (1-sigma2^2) delta1^2, sigma2^2))
  double t_max = 0.0;       // 2 (1 - beta_tilde^2) / (2 - beta_tilde^2)
  std::optional<double> gamma_fit;
  double s_min_a = 0.0, s_max_a = 0.0;
  bool ranges_ok = false;  // all constants inside their open ranges
  std::string note;

  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

DiagnosticsReport contraction_constants(const model::SamplingEnsemble& ensemble,
                                        std::span<const cd> x_ref,
                                        bool fill_zero_phases = false);

/// Largest relaxation with a local contraction guarantee:
/// 2 (1 - beta_tilde^2) / (2 - beta_tilde^2).
double t_max_from_beta_tilde(double beta_tilde);

/// Contraction factor the local theory guarantees for relaxation t:
/// sqrt((1-t)^2 + t^2 / (1 - beta_tilde^2)).
double rgps_rate_bound(double beta_tilde, double t);

struct RateFit {
  double gamma = 0.0;
  bool degenerate = false;
};

/// Least-squares slope of log rel_err over the tail half of the trace;
/// gamma = exp(slope). Requires >= 10 records with rel_err > 1e-14;
/// constant traces come back flagged degenerate.
RateFit fit_rate(const solvers::Trace& trace);

/// Distance of the GPS-family state from the single-variable fixed-point
/// equation: forms z = (x + lambda, y + nu) and returns
/// ||M(2 prox(z) - z) - prox(z)||.
double fixed_point_residual(const solvers::SolverState& state,
                            const graph::GraphProjector& projector,
                            const model::ProblemInstance& instance,
                            const model::PriorSpec& prior =
                                model::PriorSpec::none());

}  // namespace gps::diagnostics
