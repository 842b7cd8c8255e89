#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fewcycle/error.hpp"
#include "fewcycle/ode.hpp"
#include "fewcycle/pulse.hpp"
#include "fewcycle/quadrature.hpp"
#include "fewcycle/theta.hpp"
#include "fewcycle/trajectory.hpp"

namespace fewcycle {

/// Amplitudes of the upper |c> and lower |d> levels.
struct QuantumState {
  cplx c{0.0, 0.0};
  cplx d{1.0, 0.0};

  double norm() const { return std::norm(c) + std::norm(d); }
};

struct SolverSettings {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t intervals = 0;  // output grid; 0 picks auto_intervals()
  std::size_t max_steps = 5'000'000;
  double fixed_step = 0.0;    // > 0 switches the integrator to fixed steps
};

/// Where |D| drops below this, f = C/D is reported as masked.
inline constexpr double kMaskThreshold = 1e-6;
/// Largest tolerated deviation of |C|^2 + |D|^2 from one.
inline constexpr double kNormDriftLimit = 1e-6;

struct ExactSolution {
  ComplexTrajectory c;
  ComplexTrajectory d;
  ComplexTrajectory f;
  ode::Stats stats;

  double max_norm_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < c.samples.size(); ++i)
      worst = std::max(worst, std::abs(std::norm(c.samples[i]) + std::norm(d.samples[i]) - 1.0));
    return worst;
  }
};

inline std::size_t resolve_intervals(const PulseParams& p, std::size_t requested) {
  return requested == 0 ? auto_intervals(p) : requested;
}

/// Integrates C' = -i theta-dot D, D' = -i conj(theta-dot) C from `start` at
/// t_start to t_end and returns the state at each of the `intervals`+1 nodes.
inline std::vector<QuantumState> propagate(const PulseParams& p, const SolverSettings& s,
                                           QuantumState start, double t_start, double t_end,
                                           std::size_t intervals, ode::Stats* stats = nullptr) {
  validate(p);
  const cplx i(0.0, 1.0);
  auto rhs = [&](double t, const ode::State<2>& y) -> ode::State<2> {
    const cplx rate = field_at(p, t) * std::exp(i * (p.omega_c * t));
    return {-i * rate * y[1], -i * std::conj(rate) * y[0]};
  };
  ode::StepControl ctl{s.rtol, s.atol, s.max_steps, s.fixed_step};
  const auto raw = ode::integrate<2>(rhs, {start.c, start.d}, t_start, t_end, intervals, ctl, stats);
  std::vector<QuantumState> out;
  out.reserve(raw.size());
  for (const auto& y : raw) out.push_back({y[0], y[1]});
  return out;
}

/// Ground truth: (C, D) from (0, 1) across the pulse, with f = C/D.
inline ExactSolution solve_exact(const PulseParams& p, const SolverSettings& s = {}) {
  validate(p);
  const std::size_t k = resolve_intervals(p, s.intervals);
  const TimeGrid grid(p.tau(), k);
  ExactSolution sol;
  const auto states = propagate(p, s, QuantumState{}, 0.0, p.tau(), k, &sol.stats);

  std::vector<cplx> c(grid.size()), d(grid.size()), f(grid.size());
  std::vector<std::uint8_t> mask(grid.size(), 0);
  for (std::size_t n = 0; n < states.size(); ++n) {
    c[n] = states[n].c;
    d[n] = states[n].d;
    const double drift = std::abs(states[n].norm() - 1.0);
    if (!(drift <= kNormDriftLimit))
      throw Error(ErrorCode::NormDrift, "norm drift " + std::to_string(drift) + " at t = " +
                                            std::to_string(grid.time(n)));
    if (std::abs(d[n]) > kMaskThreshold) {
      f[n] = c[n] / d[n];
    } else {
      mask[n] = 1;
    }
  }
  sol.c = grid.make(std::move(c));
  sol.d = grid.make(std::move(d));
  sol.f = grid.make(std::move(f));
  sol.f.masked = std::move(mask);
  return sol;
}

/// Exact solution of the linearised first-order equation
///   f1' = 2 theta conj(theta') f1 + i theta^2 conj(theta') - i theta',
/// f1(t) = -(i/2) [theta(t) + int_0^t theta'(t') exp(alpha(t', t)) dt'] with
/// alpha(t', t) = 2 (B(t) - B(t')) and B the running integral of
/// theta conj(theta'). The kernel factorises, so one cumulative pass over
/// theta' exp(-2B) gives every output time.
inline ComplexTrajectory solve_f1_exact(const PulseParams& p, std::size_t intervals) {
  validate(p);
  const cplx nu(p.omega_c, 0.0);
  const auto theta = theta_quadrature(p, nu, intervals);
  const TimeGrid grid(p.tau(), intervals);
  const auto rate = theta_rate(p, nu, grid);
  const double h = grid.step();

  std::vector<cplx> integrand(grid.size());
  for (std::size_t n = 0; n < integrand.size(); ++n)
    integrand[n] = theta.samples[n] * std::conj(rate[n]);
  const auto b = quad::cumulative_simpson(integrand, h);

  for (std::size_t n = 0; n < integrand.size(); ++n) integrand[n] = rate[n] * std::exp(-2.0 * b[n]);
  const auto inner = quad::cumulative_simpson(integrand, h);

  const cplx i(0.0, 1.0);
  std::vector<cplx> f1(grid.size());
  for (std::size_t n = 0; n < f1.size(); ++n)
    f1[n] = -0.5 * i * (theta.samples[n] + std::exp(2.0 * b[n]) * inner[n]);
  f1[0] = 0.0;
  return grid.make(std::move(f1));
}

struct RwaSolution {
  ComplexTrajectory c;
  ComplexTrajectory d;
  ComplexTrajectory f;
  std::vector<double> area;
};

/// Rotating-wave solution C = -i sin(A/2), D = cos(A/2), f = -i tan(A/2)
/// with A the running pulse area.
inline RwaSolution solve_rwa(const PulseParams& p, std::size_t intervals) {
  validate(p);
  const TimeGrid grid(p.tau(), intervals);
  std::vector<double> omega(grid.size());
  for (std::size_t n = 0; n < omega.size(); ++n) omega[n] = envelope_at(p, grid.time(n));
  RwaSolution out;
  out.area = quad::cumulative_simpson(omega, grid.step());

  std::vector<cplx> c(grid.size()), d(grid.size()), f(grid.size());
  std::vector<std::uint8_t> mask(grid.size(), 0);
  const cplx i(0.0, 1.0);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double half = 0.5 * out.area[n];
    c[n] = -i * std::sin(half);
    d[n] = std::cos(half);
    if (std::abs(std::cos(half)) < kMaskThreshold) {
      mask[n] = 1;
    } else {
      f[n] = -i * std::tan(half);
    }
  }
  out.c = grid.make(std::move(c));
  out.d = grid.make(std::move(d));
  out.f = grid.make(std::move(f));
  out.f.masked = std::move(mask);
  return out;
}

}  // namespace fewcycle
