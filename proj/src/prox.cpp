#include "gps/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gps/kernels.hpp"

namespace gps::prox {

ProxParams params_from(const model::PriorSpec& spec) {
  ProxParams p;
  p.p = spec.p;
  p.s = spec.s;
  p.support = spec.support.empty() ? nullptr : &spec.support;
  p.real_valued = spec.real_valued;
  p.nonnegative = spec.nonnegative;
  return p;
}

CVector prox_amplitude(std::span<const cd> z, std::span<const double> b) {
  if (z.size() != b.size()) throw DimensionError("prox_amplitude: lengths");
  CVector out(z.size());
  kernels::amplitude_project(z, b, out);
  return out;
}

namespace {

bool in_support(const ProxParams& params, std::size_t i) {
  return params.support == nullptr || params.support->empty() ||
         (*params.support)[i] != 0;
}

void check_support(const ProxParams& params, std::size_t n) {
  if (params.support != nullptr && !params.support->empty() &&
      params.support->size() != n) {
    throw DimensionError("prior support mask length mismatch");
  }
}

CVector indicator(std::span<const cd> x, const ProxParams& params) {
  CVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!in_support(params, i)) {
      out[i] = cd(0.0, 0.0);
      continue;
    }
    double re = x[i].real();
    double im = params.real_valued ? 0.0 : x[i].imag();
    if (params.nonnegative && re < 0.0) re = 0.0;
    out[i] = cd(re, im);
  }
  return out;
}

// Soft threshold on the real part (the l1 prox of the real signal model);
// complex shrinkage lives in prox_l1.
CVector soft(std::span<const cd> x, const ProxParams& params) {
  if (!(params.p > 0.0)) throw ConfigError("soft threshold requires p > 0");
  CVector out(x.size(), cd(0.0, 0.0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!in_support(params, i)) continue;
    const double r = x[i].real();
    double v = 0.0;
    if (r > params.p) {
      v = r - params.p;
    } else if (r < -params.p) {
      v = r + params.p;
    }
    out[i] = cd(v, 0.0);
  }
  return out;
}

CVector hard(std::span<const cd> x, const ProxParams& params) {
  std::vector<std::size_t> idx;
  idx.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (in_support(params, i)) idx.push_back(i);
  }
  const std::size_t s = static_cast<std::size_t>(params.s);
  if (s > idx.size()) {
    throw ConfigError("hard threshold: s exceeds support size");
  }
  // keep the s largest moduli; ties go to the lowest index
  std::partial_sort(idx.begin(), idx.begin() + s, idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double ma = std::abs(x[a]), mb = std::abs(x[b]);
                      if (ma != mb) return ma > mb;
                      return a < b;
                    });
  CVector out(x.size(), cd(0.0, 0.0));
  for (std::size_t k = 0; k < s; ++k) out[idx[k]] = x[idx[k]];
  return out;
}

}  // namespace

CVector prox_prior(std::span<const cd> x, model::PriorSpec::Kind kind,
                   const ProxParams& params) {
  check_support(params, x.size());
  switch (kind) {
    case model::PriorSpec::Kind::none:
      return CVector(x.begin(), x.end());
    case model::PriorSpec::Kind::indicator:
      return indicator(x, params);
    case model::PriorSpec::Kind::soft_threshold:
      return soft(x, params);
    case model::PriorSpec::Kind::hard_threshold:
      return hard(x, params);
  }
  throw ConfigError("unknown prior kind");
}

CVector prox_prior(std::span<const cd> x, const model::PriorSpec& spec) {
  return prox_prior(x, spec.kind, params_from(spec));
}

CVector prox_l1(std::span<const cd> y, double weight) {
  if (!(weight > 0.0)) throw ConfigError("prox_l1: weight must be positive");
  CVector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double mag = std::abs(y[i]);
    const double f = mag > weight ? 1.0 - weight / mag : 0.0;
    out[i] = y[i] * f;
  }
  return out;
}

}  // namespace gps::prox
