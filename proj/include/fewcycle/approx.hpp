#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fewcycle/error.hpp"
#include "fewcycle/pulse.hpp"
#include "fewcycle/quadrature.hpp"
#include "fewcycle/theta.hpp"
#include "fewcycle/trajectory.hpp"

namespace fewcycle {

/// Discrete L2 norm with trapezoid weights (masked samples skipped).
inline double l2_norm(const ComplexTrajectory& f) {
  const std::size_t k = f.intervals();
  const double h = f.step();
  double sum = 0.0;
  for (std::size_t n = 0; n <= k; ++n) {
    if (f.is_masked(n)) continue;
    const double w = (n == 0 || n == k) ? 0.5 * h : h;
    sum += w * std::norm(f.samples[n]);
  }
  return std::sqrt(sum);
}

inline double l2_distance(const ComplexTrajectory& a, const ComplexTrajectory& b) {
  ComplexTrajectory diff = a;
  for (std::size_t n = 0; n < diff.samples.size(); ++n) diff.samples[n] -= b.samples[n];
  return l2_norm(diff);
}

/// theta(omega_c + shift, t) and its partner rate conj-field(t) exp(-i(omega_c + shift) t),
/// both as functions of a complex frequency shift. The physical model
/// integrates the actual field; tests substitute other models to probe the
/// algebra of the closed forms in isolation.
struct ShiftedTheta {
  TimeGrid grid;
  std::function<std::vector<cplx>(cplx shift)> theta;
  std::function<std::vector<cplx>(cplx shift)> paired_rate;

  static ShiftedTheta physical(const PulseParams& p, std::size_t intervals) {
    validate(p);
    const TimeGrid grid(p.tau(), intervals);
    ShiftedTheta model{grid, {}, {}};
    model.theta = [p, intervals](cplx shift) {
      return theta_quadrature(p, p.omega_c + shift, intervals).samples;
    };
    model.paired_rate = [p, grid](cplx shift) {
      std::vector<cplx> out(grid.size());
      const cplx nu = p.omega_c + shift;
      for (std::size_t n = 0; n < out.size(); ++n) {
        const double t = grid.time(n);
        out[n] = field_at(p, t) * std::exp(cplx(0.0, -1.0) * nu * t);
      }
      return out;
    };
    return model;
  }
};

/// f0(t) = -i theta(omega_c, t).
inline ComplexTrajectory f0(const PulseParams& p, std::size_t intervals) {
  auto theta = theta_quadrature(p, p.omega_c, intervals);
  for (auto& v : theta.samples) v *= cplx(0.0, -1.0);
  return theta;
}

enum class AlphaKind { Alpha0, AlphaK };

/// One of the averaged phase constants: alpha0 (kind Alpha0, order 0) or
/// alpha_k of the recursive sequence.
struct AlphaConstant {
  cplx value{};
  AlphaKind kind = AlphaKind::Alpha0;
  int order = 0;
};

/// alpha0 = (2i/tau) int_0^tau theta conj(theta-dot) dt.
inline AlphaConstant alpha0(const PulseParams& p, std::size_t intervals) {
  const auto theta = theta_quadrature(p, p.omega_c, intervals);
  const TimeGrid grid(p.tau(), intervals);
  const auto rate = theta_rate(p, p.omega_c, grid);
  std::vector<cplx> integrand(grid.size());
  for (std::size_t n = 0; n < integrand.size(); ++n)
    integrand[n] = theta.samples[n] * std::conj(rate[n]);
  const cplx value = cplx(0.0, 2.0 / grid.tau) * quad::simpson(integrand, grid.step());
  return {value, AlphaKind::Alpha0, 0};
}

/// Closed-form first-order solution
///   f1(t) = -(i/2) [theta(omega_c, t) + exp(-i alpha0 t) theta(omega_c + alpha0, t)].
inline ComplexTrajectory f1_closed(const PulseParams& p, std::size_t intervals) {
  const cplx a0 = alpha0(p, intervals).value;
  const auto base = theta_quadrature(p, p.omega_c, intervals);
  const auto shifted = theta_quadrature(p, p.omega_c + a0, intervals);
  const TimeGrid grid(p.tau(), intervals);
  const cplx i(0.0, 1.0);
  std::vector<cplx> out(grid.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double t = grid.time(n);
    out[n] = -0.5 * i * (base.samples[n] + std::exp(-i * a0 * t) * shifted.samples[n]);
  }
  return grid.make(std::move(out));
}

/// alpha_k = -(2/tau) int_0^tau conj(theta-dot) f_k dt.
inline AlphaConstant alpha_k(const PulseParams& p, const ComplexTrajectory& fk, int order) {
  const TimeGrid grid(p.tau(), fk.intervals());
  const auto rate = theta_rate(p, p.omega_c, grid);
  std::vector<cplx> integrand(grid.size());
  for (std::size_t n = 0; n < integrand.size(); ++n)
    integrand[n] = std::conj(rate[n]) * fk.samples[n];
  const cplx value = (-2.0 / grid.tau) * quad::simpson(integrand, grid.step());
  return {value, AlphaKind::AlphaK, order};
}

/// The recursive sequence [f~1, ..., f~k_max]:
///   f~(k+1) = 1/2 { f~k - 2i exp(-i ak t) theta(omega_c + ak, t)
///                   - int_0^t exp(-i ak (t - t')) f~k'(t') dt' }.
/// Throws Diverged when successive differences grow three times in a row.
inline std::vector<ComplexTrajectory> fk_sequence(const PulseParams& p, std::size_t intervals,
                                                  int k_max) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be at least 1");
  const TimeGrid grid(p.tau(), intervals);
  const double h = grid.step();
  const cplx i(0.0, 1.0);

  std::vector<ComplexTrajectory> seq;
  seq.push_back(f1_closed(p, intervals));
  double last_step = -1.0;
  int growth = 0;
  for (int k = 1; k < k_max; ++k) {
    const auto& fk = seq.back();
    const cplx ak = alpha_k(p, fk, k).value;
    const auto shifted = theta_quadrature(p, p.omega_c + ak, intervals);
    const auto dfk = quad::derivative(fk.samples, h);

    std::vector<cplx> integrand(grid.size());
    for (std::size_t n = 0; n < integrand.size(); ++n)
      integrand[n] = std::exp(i * ak * grid.time(n)) * dfk[n];
    const auto conv = quad::cumulative_simpson(integrand, h);

    std::vector<cplx> next(grid.size());
    for (std::size_t n = 0; n < next.size(); ++n) {
      const cplx phase = std::exp(-i * ak * grid.time(n));
      next[n] = 0.5 * (fk.samples[n] - 2.0 * i * phase * shifted.samples[n] - phase * conv[n]);
    }
    seq.push_back(grid.make(std::move(next)));

    const double step = l2_distance(seq.back(), fk);
    if (!std::isfinite(step)) throw Error(ErrorCode::Diverged, "non-finite iterate at k = " + std::to_string(k + 1));
    growth = (last_step >= 0.0 && step > last_step) ? growth + 1 : 0;
    if (growth >= 3)
      throw Error(ErrorCode::Diverged, "sequence steps grew three times in a row at k = " + std::to_string(k + 1));
    last_step = step;
  }
  return seq;
}

struct LambdaOptions {
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 100;
  std::optional<cplx> seed;  // defaults to alpha0 / 2
};

struct LambdaResult {
  cplx lambda{};
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<cplx> trace;
};

/// Right-hand side of the self-consistency condition for the frequency shift,
///   (i/tau) int_0^tau conj-field(t) exp(-i(omega_c + lambda) t) theta(omega_c + lambda, t) dt.
/// For real lambda the paired rate is exactly conj(theta-dot(omega_c + lambda)); for
/// complex lambda this is its holomorphic continuation.
inline cplx lambda_rhs(const ShiftedTheta& model, cplx lambda) {
  const auto theta = model.theta(lambda);
  const auto rate = model.paired_rate(lambda);
  std::vector<cplx> integrand(theta.size());
  for (std::size_t n = 0; n < integrand.size(); ++n) integrand[n] = rate[n] * theta[n];
  return cplx(0.0, 1.0 / model.grid.tau) * quad::simpson(integrand, model.grid.step());
}

/// Damped Picard iteration lambda <- (1 - g) lambda + g RHS(lambda).
/// Not converging is reported through the result, not thrown.
inline LambdaResult solve_lambda(const ShiftedTheta& model, cplx seed, const LambdaOptions& opt = {}) {
  LambdaResult r;
  cplx lambda = seed;
  double best = std::numeric_limits<double>::infinity();
  cplx best_lambda = seed;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const cplx rhs = lambda_rhs(model, lambda);
    const double residual = std::abs(lambda - rhs);
    r.trace.push_back(lambda);
    r.iterations = it;
    if (!std::isfinite(residual)) break;
    if (residual < best) {
      best = residual;
      best_lambda = lambda;
    }
    if (residual < opt.tolerance * std::max(1.0, std::abs(lambda))) {
      r.converged = true;
      break;
    }
    lambda = (1.0 - opt.damping) * lambda + opt.damping * rhs;
  }
  r.lambda = best_lambda;
  r.residual = best;
  return r;
}

inline LambdaResult solve_lambda(const PulseParams& p, std::size_t intervals, const LambdaOptions& opt = {}) {
  const auto model = ShiftedTheta::physical(p, intervals);
  const cplx seed = opt.seed ? *opt.seed : 0.5 * alpha0(p, intervals).value;
  try {
    return solve_lambda(model, seed, opt);
  } catch (const Error& e) {
    // an iterate wandered out of the resolvable frequency range
    if (e.code() != ErrorCode::GridTooCoarse && e.code() != ErrorCode::Overflow) throw;
    LambdaResult r;
    r.lambda = seed;
    r.residual = std::numeric_limits<double>::infinity();
    return r;
  }
}

/// f~inf(t) = -i exp(-i lambda t) theta(omega_c + lambda, t) for a given shift.
inline ComplexTrajectory finfinity_at(const ShiftedTheta& model, cplx lambda) {
  const auto theta = model.theta(lambda);
  const cplx i(0.0, 1.0);
  std::vector<cplx> out(theta.size());
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = -i * std::exp(-i * lambda * model.grid.time(n)) * theta[n];
  return model.grid.make(std::move(out));
}

inline ComplexTrajectory finfinity(const PulseParams& p, std::size_t intervals,
                                   LambdaResult* solved = nullptr) {
  const auto r = solve_lambda(p, intervals);
  if (solved) *solved = r;
  if (!r.converged)
    throw Error(ErrorCode::NotConverged, "frequency shift did not converge (residual " +
                                             std::to_string(r.residual) + ")");
  return finfinity_at(ShiftedTheta::physical(p, intervals), r.lambda);
}

struct ZSeries {
  std::vector<ComplexTrajectory> terms;  // z_0 ... z_order
  ComplexTrajectory f;                   // exp(i omega_c t) sum_n z_n
};

inline constexpr double kTanGuard = 0.1;
inline constexpr int kMaxZOrder = 6;

/// Expansion of z = exp(-i omega_c t) f in powers of the transition
/// frequency. With g the field and G its running integral,
///   z_0 = -i tan G,
///   z_n = sec^2 G int_0^t cos^2 G (i g sum_{j=1}^{n-1} z_j z_{n-j} - i omega_c z_{n-1}) dt'
/// (sec^2 G = exp(w) with w = 2i int g z_0).
inline ZSeries z_series(const PulseParams& p, std::size_t intervals, int order) {
  validate(p);
  if (order < 0 || order > kMaxZOrder)
    throw Error(ErrorCode::InvalidArgument, "z-series order must lie in [0, 6]");
  const TimeGrid grid(p.tau(), intervals);
  check_theta_grid(p, p.omega_c, intervals);
  const double h = grid.step();
  const cplx i(0.0, 1.0);

  std::vector<double> g(grid.size());
  for (std::size_t n = 0; n < g.size(); ++n) g[n] = field_at(p, grid.time(n));
  const auto area = quad::cumulative_simpson(g, h);

  std::vector<double> cos2(grid.size());
  for (std::size_t n = 0; n < area.size(); ++n) {
    const double dist = std::abs(std::remainder(area[n] - 0.5 * std::numbers::pi, std::numbers::pi));
    if (dist < kTanGuard)
      throw Error(ErrorCode::NearSingularArea,
                  "field area within " + std::to_string(kTanGuard) + " of a tangent pole at t = " +
                      std::to_string(grid.time(n)));
    cos2[n] = std::cos(area[n]) * std::cos(area[n]);
  }

  ZSeries out;
  std::vector<cplx> z0(grid.size());
  for (std::size_t n = 0; n < z0.size(); ++n) z0[n] = -i * std::tan(area[n]);
  out.terms.push_back(grid.make(std::move(z0)));

  int growth = 0;
  for (int k = 1; k <= order; ++k) {
    std::vector<cplx> source(grid.size());
    for (std::size_t n = 0; n < source.size(); ++n) {
      cplx quadratic{};
      for (int j = 1; j < k; ++j) quadratic += out.terms[j].samples[n] * out.terms[k - j].samples[n];
      source[n] = cos2[n] * (i * g[n] * quadratic - i * p.omega_c * out.terms[k - 1].samples[n]);
    }
    auto zk = quad::cumulative_simpson(source, h);
    for (std::size_t n = 0; n < zk.size(); ++n) zk[n] /= cos2[n];
    out.terms.push_back(grid.make(std::move(zk)));

    const double prev = l2_norm(out.terms[k - 1]);
    const double cur = l2_norm(out.terms[k]);
    if (!std::isfinite(cur)) throw Error(ErrorCode::Diverged, "non-finite z-series term");
    growth = (k >= 2 && cur > prev) ? growth + 1 : 0;
    if (growth >= 2) throw Error(ErrorCode::Diverged, "z-series terms grew twice in a row");
  }

  std::vector<cplx> f(grid.size());
  for (std::size_t n = 0; n < f.size(); ++n) {
    cplx sum{};
    for (const auto& term : out.terms) sum += term.samples[n];
    f[n] = std::exp(i * p.omega_c * grid.time(n)) * sum;
  }
  out.f = grid.make(std::move(f));
  return out;
}

}  // namespace fewcycle
