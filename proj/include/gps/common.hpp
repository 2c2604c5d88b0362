#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gps {

using cd = std::complex<double>;
using CVector = std::vector<cd>;
using RVector = std::vector<double>;
using BVector = std::vector<std::uint8_t>;  // boolean masks

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or inconsistent arguments (CLI exit code 1).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Runtime numerical failure: factorization breakdown, CG stall, ... (exit code 2).
class NumericalError : public Error {
public:
  using Error::Error;
};

class DimensionError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derive an independent stream seed from a base seed and up to three indices.
/// Used for the experiment seed discipline: trial t of cell c gets
/// mix_seed(base, c, t) so any single cell reruns identically in isolation.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a = 0,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

}  // namespace gps
