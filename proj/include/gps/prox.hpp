#pragma once

#include <span>

#include "gps/common.hpp"
#include "gps/model.hpp"

namespace gps::prox {

/// Knobs read by prox_prior; only the fields demanded by the active prior
/// variant are consulted.
struct ProxParams {
  double p = 0.0;                     // soft threshold
  int s = 0;                          // hard threshold sparsity
  const BVector* support = nullptr;   // null or empty = full support
  bool real_valued = false;
  bool nonnegative = false;
};

ProxParams params_from(const model::PriorSpec& spec);

/// Projection onto {y : |y| = b}: out_i = b_i z_i / |z_i|, 0 where z_i = 0.
CVector prox_amplitude(std::span<const cd> z, std::span<const double> b);

CVector prox_prior(std::span<const cd> x, model::PriorSpec::Kind kind,
                   const ProxParams& params);
CVector prox_prior(std::span<const cd> x, const model::PriorSpec& spec);

/// Complex soft shrinkage: out_i = y_i max(1 - weight / |y_i|, 0).
CVector prox_l1(std::span<const cd> y, double weight);

}  // namespace gps::prox
