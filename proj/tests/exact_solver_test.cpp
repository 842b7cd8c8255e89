#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fewcycle/exact_solver.hpp"
#include "oracles.hpp"

using namespace fewcycle;
using C = std::complex<double>;

TEST(SolveExact, NoCouplingLeavesGroundState) {
  auto p = oracle::benchmark();
  p.omega0 = 0.0;
  const auto s = solve_exact(p);
  for (std::size_t n = 0; n < s.c.samples.size(); ++n) {
    EXPECT_EQ(s.c.samples[n], C(0, 0));
    EXPECT_EQ(s.d.samples[n], C(1, 0));
    EXPECT_EQ(s.f.samples[n], C(0, 0));
  }
}

TEST(SolveExact, NormConservedOnRandomParameters) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    PulseParams p;
    p.omega0 = 2.0 * u(rng);
    p.omega_c = 20.0 * u(rng);
    p.phi = 2 * std::numbers::pi * u(rng);
    p.cycles = 1 + 4 * u(rng);
    EXPECT_LT(solve_exact(p).max_norm_error(), 1e-9) << "trial " << trial;
  }
}

TEST(SolveExact, ToleranceRefinementAtBenchmark) {
  const auto p = oracle::benchmark();
  SolverSettings loose, tight;
  tight.rtol = 1e-12;
  tight.atol = 1e-14;
  const double a = std::norm(solve_exact(p, loose).c.samples.back());
  const double b = std::norm(solve_exact(p, tight).c.samples.back());
  EXPECT_LT(std::abs(a - b), 1e-8 * std::abs(b));
}

TEST(SolveExact, RestartAtMidpointMatchesSinglePass) {
  PulseParams p = oracle::benchmark();
  p.omega0 = 0.8;
  p.omega_c = 1.3;
  const SolverSettings s;
  const std::size_t k = 1000;
  const auto whole = propagate(p, s, QuantumState{}, 0.0, p.tau(), k);
  const auto first = propagate(p, s, QuantumState{}, 0.0, 0.5 * p.tau(), k / 2);
  const auto second = propagate(p, s, first.back(), 0.5 * p.tau(), p.tau(), k / 2);
  EXPECT_LT(std::abs(whole[k / 2].c - first.back().c), 1e-8);
  EXPECT_LT(std::abs(whole.back().c - second.back().c), 1e-8);
  EXPECT_LT(std::abs(whole.back().d - second.back().d), 1e-8);
}

TEST(SolveExact, FixedStepConvergenceOrderAtLeastFour) {
  PulseParams p = oracle::benchmark();
  p.omega0 = 0.6;
  p.omega_c = 0.9;
  SolverSettings ref;
  ref.rtol = 1e-13;
  ref.atol = 1e-15;
  const double truth = std::abs(propagate(p, ref, QuantumState{}, 0.0, p.tau(), 2).back().c);
  double prev = 0.0;
  for (double h : {0.4, 0.2, 0.1}) {
    SolverSettings s;
    s.fixed_step = h;
    const double err = std::abs(std::abs(propagate(p, s, QuantumState{}, 0.0, p.tau(), 2).back().c) - truth);
    if (prev > 0.0) {
      EXPECT_GE(std::log2(prev / err), 4.0) << "h=" << h;
    }
    prev = err;
  }
}

TEST(SolveExact, RiccatiResidualOfDerivedRatio) {
  PulseParams p = oracle::benchmark();
  p.omega0 = 0.5;
  p.omega_c = 0.7;
  const std::size_t k = 4000;
  SolverSettings s;
  s.intervals = k;
  const auto sol = solve_exact(p, s);
  const double h = p.tau() / k;
  const auto rate = oracle::rate(p, k);
  const auto df = oracle::fd_interior(sol.f.samples, h);
  double max_rate = 0.0, worst = 0.0;
  for (auto r : rate) max_rate = std::max(max_rate, std::abs(r));
  for (std::size_t n = 2; n + 2 <= k; ++n) {
    if (std::abs(sol.d.samples[n]) <= 0.1) continue;
    const C f = sol.f.samples[n];
    const C residual = df[n] - (C(0, 1) * std::conj(rate[n]) * f * f - C(0, 1) * rate[n]);
    worst = std::max(worst, std::abs(residual));
  }
  EXPECT_LT(worst, 1e-3 * max_rate);
}

TEST(SolveExact, StepLimit) {
  SolverSettings s;
  s.max_steps = 10;
  try {
    solve_exact(oracle::benchmark(), s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepLimitExceeded);
  }
}

TEST(SolveExact, CoarseFixedStepTripsNormDrift) {
  PulseParams p = oracle::benchmark();
  p.omega0 = 2.0;
  p.omega_c = 10.0;
  SolverSettings s;
  s.intervals = 64;
  s.fixed_step = 0.29;
  try {
    solve_exact(p, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NormDrift);
  }
}

TEST(SolveF1Exact, ZeroFieldAndInitialValue) {
  auto p = oracle::benchmark();
  EXPECT_EQ(solve_f1_exact(p, 512).samples.front(), C(0, 0));
  p.omega0 = 0.0;
  for (auto v : solve_f1_exact(p, 512).samples) EXPECT_EQ(v, C(0, 0));
}

TEST(SolveF1Exact, SatisfiesLinearisedEquation) {
  const auto p = oracle::benchmark();
  const std::size_t k = auto_intervals(p);
  const auto f1 = solve_f1_exact(p, k);
  const auto theta = theta_quadrature(p, p.omega_c, k);
  const auto rate = oracle::rate(p, k);
  const auto df = oracle::fd_interior(f1.samples, p.tau() / k);
  double max_rate = 0.0, worst = 0.0;
  for (auto r : rate) max_rate = std::max(max_rate, std::abs(r));
  const C i(0, 1);
  for (std::size_t n = 2; n + 2 <= k; ++n) {
    const C th = theta.samples[n], rc = std::conj(rate[n]);
    const C rhs = 2.0 * th * rc * f1.samples[n] + i * th * th * rc - i * rate[n];
    worst = std::max(worst, std::abs(df[n] - rhs));
  }
  EXPECT_LT(worst, 1e-4 * max_rate);
}

TEST(SolveRwa, ZeroAreaStaysInGroundState) {
  auto p = oracle::benchmark();
  p.omega0 = 0.0;
  const auto r = solve_rwa(p, 100);
  for (std::size_t n = 0; n <= 100; ++n) {
    EXPECT_EQ(r.f.samples[n], C(0, 0));
    EXPECT_EQ(r.d.samples[n], C(1, 0));
  }
}

TEST(SolveRwa, SquarePulseOfAreaHalfPi) {
  PulseParams p = oracle::benchmark();
  p.envelope = Envelope::square();
  p.omega0 = 0.5 * std::numbers::pi / p.tau();
  const auto r = solve_rwa(p, 200);
  EXPECT_NEAR(r.f.samples.back().real(), 0.0, 1e-15);
  EXPECT_NEAR(r.f.samples.back().imag(), -1.0, 1e-14);
  for (std::size_t n = 0; n <= 200; ++n)
    EXPECT_LT(std::abs(std::norm(r.c.samples[n]) + std::norm(r.d.samples[n]) - 1.0), 1e-15);
}

TEST(SolveRwa, MasksTangentPole) {
  PulseParams p = oracle::benchmark();
  p.envelope = Envelope::square();
  p.omega0 = std::numbers::pi / p.tau();
  const auto r = solve_rwa(p, 200);
  EXPECT_TRUE(r.f.is_masked(200));
  EXPECT_FALSE(r.f.is_masked(100));
}
