#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "fewcycle/error.hpp"
#include "fewcycle/trajectory.hpp"

namespace fewcycle::ode {

template <std::size_t N>
using State = std::array<cplx, N>;

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 5'000'000;
  /// When positive, take fixed steps no longer than this instead of adapting.
  double fixed_step = 0.0;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [coef, k] : terms)
    if (coef != 0.0)
      for (std::size_t i = 0; i < N; ++i) out[i] += (h * coef) * (*k)[i];
  return out;
}

}  // namespace detail

/// Dormand-Prince 5(4) integrator with FSAL and local extrapolation.
///
/// The solution is reported at every node of a uniform grid over
/// [t_start, t_end]; steps are shortened so that each node is hit exactly,
/// which keeps the reported samples free of interpolation error.
template <std::size_t N, typename Rhs>
std::vector<State<N>> integrate(Rhs&& rhs, State<N> y, double t_start, double t_end,
                                std::size_t intervals, const StepControl& ctl, Stats* stats = nullptr) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (intervals < 1) throw Error(ErrorCode::InvalidArgument, "need at least one output interval");
  if (!(t_end > t_start)) throw Error(ErrorCode::InvalidArgument, "empty integration interval");
  const bool adaptive = !(ctl.fixed_step > 0.0);
  if (adaptive && !(ctl.rtol > 0.0 && ctl.atol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");

  const double out_step = (t_end - t_start) / static_cast<double>(intervals);
  auto node = [&](std::size_t i) {
    return i == intervals ? t_end : t_start + static_cast<double>(i) * out_step;
  };

  std::vector<State<N>> out;
  out.reserve(intervals + 1);
  out.push_back(y);

  Stats local;
  double t = t_start;
  State<N> k1 = rhs(t, y);
  double h = adaptive ? std::min(out_step, 1e-2 * (t_end - t_start)) : ctl.fixed_step;

  for (std::size_t i = 1; i <= intervals; ++i) {
    const double target = node(i);
    if (!adaptive) {
      // evenly split each output interval into the fewest fixed steps
      const auto sub = static_cast<std::size_t>(std::ceil((target - t) / ctl.fixed_step - 1e-9));
      h = (target - t) / static_cast<double>(std::max<std::size_t>(sub, 1));
    }
    while (t < target) {
      if (local.accepted + local.rejected >= ctl.max_steps)
        throw Error(ErrorCode::StepLimitExceeded, "step limit reached at t = " + std::to_string(t));
      bool last = false;
      double step = h;
      if (t + step >= target - 1e-12 * std::abs(target)) {
        step = target - t;
        last = true;
      }

      const State<N> y2 = detail::axpy<N>(y, step, {{a21, &k1}});
      const State<N> k2 = rhs(t + c2 * step, y2);
      const State<N> y3 = detail::axpy<N>(y, step, {{a31, &k1}, {a32, &k2}});
      const State<N> k3 = rhs(t + c3 * step, y3);
      const State<N> y4 = detail::axpy<N>(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
      const State<N> k4 = rhs(t + c4 * step, y4);
      const State<N> y5 = detail::axpy<N>(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
      const State<N> k5 = rhs(t + c5 * step, y5);
      const State<N> y6 =
          detail::axpy<N>(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
      const double t_new = last ? target : t + step;
      const State<N> k6 = rhs(t + step, y6);
      const State<N> y_new =
          detail::axpy<N>(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const State<N> k7 = rhs(t_new, y_new);

      double err = 0.0;
      if (adaptive) {
        double sum = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          const cplx e = step * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] + e6 * k6[j] +
                                 e7 * k7[j]);
          const double scale = ctl.atol + ctl.rtol * std::max(std::abs(y[j]), std::abs(y_new[j]));
          sum += std::norm(e / scale);
        }
        err = std::sqrt(sum / static_cast<double>(N));
      }

      if (!adaptive || err <= 1.0) {
        t = t_new;
        y = y_new;
        k1 = k7;
        ++local.accepted;
        if (adaptive) {
          const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
          // a step truncated to hit a node says little about the next one
          h = last ? std::max(h, step * fac) : step * fac;
        }
      } else {
        ++local.rejected;
        h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
    out.push_back(y);
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace fewcycle::ode
