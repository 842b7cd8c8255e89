#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fewcycle/faddeeva.hpp"
#include "oracles.hpp"

using namespace fewcycle;
using C = std::complex<double>;

TEST(ErfComplex, ZeroAtOrigin) { EXPECT_EQ(erf_complex(C(0, 0)), C(0, 0)); }

TEST(ErfComplex, MatchesSeriesOracleAtOnePlusI) {
  const auto ref = oracle::erf_series({1.0L, 1.0L}, 40);
  const C got = erf_complex(C(1, 1));
  EXPECT_LT(std::abs(got - C(static_cast<double>(ref.real()), static_cast<double>(ref.imag()))), 1e-12);
}

TEST(ErfComplex, MatchesSeriesOracleNearOrigin) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int n = 0; n < 200; ++n) {
    const C z(u(rng), u(rng));
    const auto ref = oracle::erf_series({z.real(), z.imag()}, 60);
    EXPECT_LT(std::abs(erf_complex(z) - C(static_cast<double>(ref.real()), static_cast<double>(ref.imag()))), 1e-13) << z;
  }
}

// Frozen from a 50-digit multiprecision evaluation.
TEST(ErfComplex, HighPrecisionReferenceValues) {
  const std::pair<C, C> cases[] = {
      {{1, 1}, {1.3161512816979476449, 0.19045346923783468628}},
      {{0.3, -0.2}, {0.34123748147213858588, -0.20852883788276887638}},
      {{2, 3}, {-20.829461427614568389, 8.6873182714701631444}},
      {{-4, 1.5}, {-0.99999986527412279995, -3.0686734688227334382e-8}},
      {{6, -0.5}, {0.99999999999999997302, 5.5310394052704538135e-18}},
      {{0.5, 5}, {-6318073744.0867658113, 1173041985.7103307861}},
      {{9, 9}, {0.96293536310820340946, -0.024310388303741711049}},
      {{-3, -7}, {11930862314097287.471, 12859127259900898.767}},
      {{7.5, 0.01}, {1.0, 4.18576707860338438e-27}},
      {{3.3, -3.3}, {1.102838951759771363, 0.063254623835010817561}},
  };
  for (const auto& [z, ref] : cases) {
    const double scale = std::max(1.0, std::abs(ref));
    EXPECT_LT(std::abs(erf_complex(z) - ref), 1e-12 * scale) << z;
  }
}

TEST(ErfComplex, ReflectionSymmetries) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  int checked = 0;
  while (checked < 1000) {
    const C z(u(rng), u(rng));
    if (std::abs(z) > 5.0) continue;
    ++checked;
    const C e = erf_complex(z);
    const double scale = std::max(1.0, std::abs(e));
    EXPECT_LT(std::abs(erf_complex(std::conj(z)) - std::conj(e)), 1e-13 * scale) << z;
    EXPECT_LT(std::abs(erf_complex(-z) + e), 1e-13 * scale) << z;
  }
}

TEST(Faddeeva, RealAxisIsGaussian) {
  for (double x : {0.0, 0.5, 2.0, 6.0}) EXPECT_NEAR(faddeeva_w(C(x, 0)).real(), std::exp(-x * x), 1e-15);
}

TEST(Faddeeva, LowerHalfPlaneReflection) {
  for (C z : {C(0.7, -0.4), C(3.0, -1.0), C(-2.0, -0.3)}) {
    const C lhs = faddeeva_w(z);
    const C rhs = 2.0 * std::exp(-z * z) - faddeeva_w(-z);
    EXPECT_LT(std::abs(lhs - rhs), 1e-13 * std::max(1.0, std::abs(lhs))) << z;
  }
}
