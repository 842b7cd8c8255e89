#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "fewcycle/error.hpp"
#include "fewcycle/faddeeva.hpp"
#include "fewcycle/pulse.hpp"
#include "fewcycle/quadrature.hpp"
#include "fewcycle/trajectory.hpp"

namespace fewcycle {

/// Minimum resolution: twenty samples per period of the fastest oscillation
/// in the integrand Omega(t) cos(omega t + phi) exp(i nu t).
inline constexpr double kSamplesPerPeriodMin = 20.0;
/// Largest |Im nu| * tau before exp(i nu t) is considered an overflow risk.
inline constexpr double kImagGuard = 50.0;

inline double fastest_frequency(const PulseParams& p, cplx nu) {
  return std::abs(nu.real()) + p.omega;
}

inline void check_theta_grid(const PulseParams& p, cplx nu, std::size_t intervals) {
  const double tau = p.tau();
  const double h = tau / static_cast<double>(intervals);
  if (h * fastest_frequency(p, nu) > 2.0 * std::numbers::pi / kSamplesPerPeriodMin)
    throw Error(ErrorCode::GridTooCoarse,
                "grid of " + std::to_string(intervals) + " intervals under-resolves frequency " +
                    std::to_string(fastest_frequency(p, nu)));
  if (std::abs(nu.imag()) * tau > kImagGuard)
    throw Error(ErrorCode::Overflow, "|Im nu| * tau exceeds " + std::to_string(kImagGuard));
}

/// Grid size used when the caller does not pick one: `samples_per_period`
/// samples across the fastest expected oscillation (carrier plus transition
/// plus a margin for the frequency shifts), even, and at least 512.
inline std::size_t auto_intervals(const PulseParams& p, double samples_per_period = 128.0) {
  const double margin = p.omega0 + p.omega0 * p.omega0 / p.omega;
  const double fmax = std::abs(p.omega_c) + p.omega + margin;
  const double periods = p.tau() * fmax / (2.0 * std::numbers::pi);
  auto k = static_cast<std::size_t>(std::ceil(periods * samples_per_period));
  k = std::max<std::size_t>(k, 512);
  return k + (k % 2);
}

/// Sampled theta-dot(nu, t) = Omega(t) cos(omega t + phi) exp(i nu t).
inline std::vector<cplx> theta_rate(const PulseParams& p, cplx nu, const TimeGrid& grid) {
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = grid.time(i);
    out[i] = field_at(p, t) * std::exp(cplx(0.0, 1.0) * nu * t);
  }
  return out;
}

/// theta(nu, t) = int_0^t Omega(t') cos(omega t' + phi) exp(i nu t') dt' on
/// a uniform grid of `intervals` panels over [0, tau].
inline ComplexTrajectory theta_quadrature(const PulseParams& p, cplx nu, std::size_t intervals) {
  validate(p);
  const TimeGrid grid(p.tau(), intervals);
  check_theta_grid(p, nu, intervals);
  const auto rate = theta_rate(p, nu, grid);
  return grid.make(quad::cumulative_simpson(rate, grid.step()));
}

/// Spectral area A~(nu, t) = int_0^t Omega(t') exp(i nu t') dt'.
/// At nu = 0 this is the pulse area A(t).
inline ComplexTrajectory spectral_area(const PulseParams& p, cplx nu, std::size_t intervals) {
  validate(p);
  const TimeGrid grid(p.tau(), intervals);
  check_theta_grid(p, nu, intervals);
  std::vector<cplx> rate(grid.size());
  for (std::size_t i = 0; i < rate.size(); ++i) {
    const double t = grid.time(i);
    rate[i] = envelope_at(p, t) * std::exp(cplx(0.0, 1.0) * nu * t);
  }
  return grid.make(quad::cumulative_simpson(rate, grid.step()));
}

namespace detail {

// exp(a) erfc(z(s)) for z(s) = (s - c - i kappa sigma^2) / (sqrt(2) sigma)
// and a = i kappa c - kappa^2 sigma^2 / 2. The combination a - z^2 reduces to
// i kappa s - (s - c)^2 / (2 sigma^2), which stays bounded.
inline cplx scaled_erfc(cplx kappa, double s, double c, double sigma) {
  const cplx i(0.0, 1.0);
  const cplx z = (s - c - i * kappa * sigma * sigma) / (std::numbers::sqrt2 * sigma);
  const cplx log_gauss = i * kappa * s - (s - c) * (s - c) / (2.0 * sigma * sigma);
  if (z.real() >= 0.0) return std::exp(log_gauss) * faddeeva_w(i * z);
  const cplx a = i * kappa * c - kappa * kappa * sigma * sigma / 2.0;
  return 2.0 * std::exp(a) - std::exp(log_gauss) * faddeeva_w(-i * z);
}

// int_0^t exp(-(s - c)^2 / (2 sigma^2) + i kappa s) ds
inline cplx gaussian_fourier_partial(cplx kappa, double t, double c, double sigma) {
  const double pref = sigma * std::sqrt(std::numbers::pi / 2.0);
  return pref * (scaled_erfc(kappa, 0.0, c, sigma) - scaled_erfc(kappa, t, c, sigma));
}

}  // namespace detail

/// Closed-form theta(nu, t) for the Gaussian envelope through the complex
/// error function: cos(omega t + phi) splits into the two carriers
/// exp(+-i(omega t + phi)), each a Gaussian Fourier integral with a
/// finite upper limit.
inline ComplexTrajectory theta_gaussian_closed(const PulseParams& p, cplx nu,
                                               std::size_t intervals) {
  validate(p);
  if (p.envelope.kind != EnvelopeKind::Gaussian)
    throw Error(ErrorCode::WrongEnvelope, "closed-form theta requires a gaussian envelope");
  const TimeGrid grid(p.tau(), intervals);
  const double sigma = p.width();
  const double c = 0.5 * p.tau();
  const cplx i(0.0, 1.0);
  const cplx up = 0.5 * p.omega0 * std::exp(i * p.phi);
  const cplx down = 0.5 * p.omega0 * std::exp(-i * p.phi);
  std::vector<cplx> out(grid.size());
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double t = grid.time(k);
    out[k] = up * detail::gaussian_fourier_partial(nu + p.omega, t, c, sigma) +
             down * detail::gaussian_fourier_partial(nu - p.omega, t, c, sigma);
  }
  return grid.make(std::move(out));
}

}  // namespace fewcycle
