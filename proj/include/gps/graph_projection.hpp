#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>

#include "gps/linalg.hpp"
#include "gps/model.hpp"

namespace gps::graph {

namespace stats {
/// Count of triangular solve pairs performed; lets tests pin the per-call
/// cost contract of the projector.
extern std::atomic<std::uint64_t> triangular_solves;
}  // namespace stats

/// Lower-triangular L with L L^* = M for Hermitian positive definite M.
/// Throws NumericalError on a non-positive pivot.
CMatrix cholesky(const CMatrix& m);

/// Solve (L L^*) x = rhs by forward and backward substitution.
CVector solve_factored(const CMatrix& l, std::span<const cd> rhs);
void solve_factored_inplace(const CMatrix& l, CVector& rhs);

/// Forward substitution alone: solve L z = rhs in place.
void forward_substitute_inplace(const CMatrix& l, CVector& rhs);

using LinOp = std::function<void(std::span<const cd>, CVector&)>;

struct CgResult {
  CVector x;
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradient for a Hermitian positive definite operator. Stops at
/// relative residual <= tol or after max_iter iterations (converged=false).
/// A non-positive curvature direction throws NumericalError (breakdown).
CgResult conjugate_gradient(const LinOp& apply, std::span<const cd> rhs,
                            double tol, int max_iter);

/// Exact projection onto the graph set C = {(x, y) : A^* x = y}. The
/// factorization is computed once at build time; a projection is one pair
/// of triangular solves plus matrix-vector products. Immutable after build
/// and safe for concurrent project calls. Holds a reference to the
/// ensemble, which must outlive the projector.
class GraphProjector {
public:
  enum class Branch { tall, wide, isometric };

  static GraphProjector build(const model::SamplingEnsemble& ensemble);
  /// Branch override for equivalence tests (isometric requires the
  /// structure tag; tall/wide require a dense matrix).
  static GraphProjector build(const model::SamplingEnsemble& ensemble,
                              Branch forced);

  Branch branch() const { return branch_; }
  const model::SamplingEnsemble& ensemble() const { return *ensemble_; }
  /// Cholesky factor of I + A A^* (tall) or I + A^* A (wide).
  const CMatrix& factor() const { return factor_; }

  void project(std::span<const cd> c, std::span<const cd> d, CVector& x,
               CVector& y) const;

  /// t * (c, d) + (1 - t) * project(c, d) for t in [0, 1). At t = 0 this is
  /// the exact projection, bit for bit.
  void project_relaxed(double t, std::span<const cd> c, std::span<const cd> d,
                       CVector& x, CVector& y) const;

private:
  const model::SamplingEnsemble* ensemble_ = nullptr;
  Branch branch_ = Branch::tall;
  double iso_scale_ = 0.0;
  CMatrix factor_;
};

/// Forward-difference total variation operator on an h x w image (row-major
/// flattening). Output stacks horizontal then vertical differences, with
/// zero rows at the last column/row.
struct TvOperator {
  std::size_t h = 0, w = 0;

  std::size_t input_size() const { return h * w; }
  std::size_t output_size() const { return 2 * h * w; }

  CVector apply(std::span<const cd> x) const;
  CVector adjoint(std::span<const cd> z) const;
};

struct TvProjection {
  CVector x, y1, y2;
  int cg_iterations = 0;
};

/// Projection onto {(x, y1, y2) : A^* x = y1, D x = y2} for a scaled
/// isometry (A A^* = l I): solves ((1 + l) I + D^* D) x = c + A d1 + D^* d2
/// by CG, then y1 = A^* x, y2 = D x. l = 1 reproduces the 2 I + D^* D
/// system. CG non-convergence is an error carrying the final residual.
TvProjection project_tv(const model::SamplingEnsemble& ensemble,
                        const TvOperator& tv, std::span<const cd> c,
                        std::span<const cd> d1, std::span<const cd> d2,
                        double cg_tol, int cg_max_iter);

}  // namespace gps::graph
