#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gps/prox.hpp"
#include "test_support.hpp"

using namespace gps;
using model::PriorSpec;

TEST_CASE("prox_amplitude rescales moduli") {
  const CVector out = prox::prox_amplitude(CVector{cd(3, 4)}, RVector{10.0});
  CHECK(std::abs(out[0] - cd(6, 8)) < 1e-14);
}

TEST_CASE("prox_amplitude zero convention is exact") {
  const CVector out = prox::prox_amplitude(CVector{cd(0, 0)}, RVector{7.0});
  CHECK(out[0] == cd(0.0, 0.0));
}

TEST_CASE("prox_amplitude fixes points of correct modulus and is idempotent") {
  auto gen = testing::rng(3);
  const CVector z = testing::random_cvector(20, gen);
  RVector b(20);
  for (std::size_t i = 0; i < 20; ++i) b[i] = std::abs(z[i]);
  const CVector once = prox::prox_amplitude(z, b);
  CHECK(testing::max_abs_diff(once, z) < 1e-14);

  const RVector b2 = testing::random_rvector(20, gen);
  RVector babs(20);
  for (std::size_t i = 0; i < 20; ++i) babs[i] = std::abs(b2[i]);
  const CVector p1 = prox::prox_amplitude(z, babs);
  const CVector p2 = prox::prox_amplitude(p1, babs);
  CHECK(testing::max_abs_diff(p1, p2) < 1e-13);
}

TEST_CASE("prox_amplitude is phase equivariant") {
  auto gen = testing::rng(4);
  const CVector z = testing::random_cvector(16, gen);
  RVector b(16);
  for (std::size_t i = 0; i < 16; ++i) b[i] = 0.5 + i;

  // multiplication by i permutes components exactly
  CVector iz(16);
  for (std::size_t k = 0; k < 16; ++k) iz[k] = cd(0, 1) * z[k];
  const CVector lhs = prox::prox_amplitude(iz, b);
  const CVector base = prox::prox_amplitude(z, b);
  for (std::size_t k = 0; k < 16; ++k) CHECK(lhs[k] == cd(0, 1) * base[k]);

  const cd alpha = std::polar(1.0, 0.77);
  CVector az(16);
  for (std::size_t k = 0; k < 16; ++k) az[k] = alpha * z[k];
  const CVector rot = prox::prox_amplitude(az, b);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(std::abs(rot[k] - alpha * base[k]) < 1e-14 * (1.0 + b[k]));
  }
}

TEST_CASE("prox_prior none is the identity") {
  auto gen = testing::rng(5);
  const CVector x = testing::random_cvector(9, gen);
  CHECK(prox::prox_prior(x, PriorSpec::none()) == x);
}

TEST_CASE("hard threshold keeps the top-s moduli") {
  const CVector x = {cd(3, 0), cd(-1, 0), cd(2, 0), cd(0, 0)};
  const CVector out = prox::prox_prior(x, PriorSpec::hard(2));
  CHECK(out == CVector{cd(3, 0), cd(0, 0), cd(2, 0), cd(0, 0)});
}

TEST_CASE("hard threshold breaks ties toward the lowest index") {
  const CVector x = {cd(1, 0), cd(-1, 0), cd(0, 1)};
  const CVector out = prox::prox_prior(x, PriorSpec::hard(2));
  CHECK(out == CVector{cd(1, 0), cd(-1, 0), cd(0, 0)});
}

TEST_CASE("hard threshold respects support and validates s") {
  const BVector support = {0, 1, 1, 0};
  const CVector x = {cd(9, 0), cd(1, 0), cd(2, 0), cd(9, 0)};
  const CVector out = prox::prox_prior(x, PriorSpec::hard(1, support));
  CHECK(out == CVector{cd(0, 0), cd(0, 0), cd(2, 0), cd(0, 0)});
  CHECK_THROWS_AS(prox::prox_prior(x, PriorSpec::hard(3, support)),
                  ConfigError);
}

TEST_CASE("hard threshold output sparsity and exact retention") {
  auto gen = testing::rng(6);
  const CVector x = testing::random_cvector(40, gen);
  const int s = 7;
  const CVector out = prox::prox_prior(x, PriorSpec::hard(s));
  int nonzeros = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] != cd(0.0, 0.0)) {
      ++nonzeros;
      CHECK(out[i] == x[i]);
    }
  }
  CHECK(nonzeros <= s);
}

TEST_CASE("soft threshold follows the sparse update formula") {
  const CVector x = {cd(5, 0), cd(-2, 0), cd(1, 0)};
  const CVector out = prox::prox_prior(x, PriorSpec::soft(2.0));
  CHECK(out == CVector{cd(3, 0), cd(0, 0), cd(0, 0)});

  // shrinkage acts on both signs of the real axis
  const CVector neg = prox::prox_prior(CVector{cd(-5, 0)}, PriorSpec::soft(2.0));
  CHECK(neg == CVector{cd(-3, 0)});

  const BVector support = {1, 0, 1};
  const CVector masked =
      prox::prox_prior(CVector{cd(5, 1), cd(5, 0), cd(4, -2)},
                       PriorSpec::soft(2.0, support));
  CHECK(masked == CVector{cd(3, 0), cd(0, 0), cd(2, 0)});
}

TEST_CASE("indicator prior composes support, realness, nonnegativity") {
  const BVector support = {1, 1, 0};
  const CVector x = {cd(-1, 2), cd(3, -4), cd(9, 9)};
  const CVector out =
      prox::prox_prior(x, PriorSpec::indicator(support, true, true));
  CHECK(out == CVector{cd(0, 0), cd(3, 0), cd(0, 0)});

  // real+nonneg on full support: drop-imag then clamp, and its fixed
  // points are fixed in either order
  const CVector fixed = {cd(0.5, 0), cd(0, 0), cd(2, 0)};
  CHECK(prox::prox_prior(fixed, PriorSpec::indicator({}, true, true)) ==
        fixed);
}

TEST_CASE("prox_l1 shrinkage") {
  CHECK(prox::prox_l1(CVector{cd(3, 0)}, 1.0)[0] == cd(2, 0));
  const CVector imag = prox::prox_l1(CVector{cd(0, 3)}, 1.0);
  CHECK(std::abs(imag[0] - cd(0, 2)) < 1e-15);
  CHECK(prox::prox_l1(CVector{cd(0.3, 0.4)}, 1.0)[0] == cd(0, 0));
  CHECK_THROWS_AS(prox::prox_l1(CVector{cd(1, 0)}, 0.0), ConfigError);
}

TEST_CASE("convex proxes are non-expansive on random pairs") {
  auto gen = testing::rng(7);
  BVector support(12, 0);
  for (std::size_t i = 0; i < 12; i += 2) support[i] = 1;
  const PriorSpec indicator = PriorSpec::indicator(support, true, true);
  const PriorSpec soft = PriorSpec::soft(0.7, support);

  for (int trial = 0; trial < 100; ++trial) {
    const CVector u = testing::random_cvector(12, gen);
    const CVector v = testing::random_cvector(12, gen);
    const double duv = std::sqrt(kernels::norm2_sq(sub(u, v)));

    const auto check = [&](const CVector& pu, const CVector& pv) {
      CHECK(std::sqrt(kernels::norm2_sq(sub(pu, pv))) <= duv + 1e-12);
    };
    check(prox::prox_prior(u, indicator), prox::prox_prior(v, indicator));
    check(prox::prox_prior(u, soft), prox::prox_prior(v, soft));
    check(prox::prox_l1(u, 0.7), prox::prox_l1(v, 0.7));
  }
}
