#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "fewcycle/error.hpp"

namespace fewcycle {

enum class EnvelopeKind { Square, Gaussian, Sech, Lorentzian };

constexpr std::string_view to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::Square: return "square";
    case EnvelopeKind::Gaussian: return "gaussian";
    case EnvelopeKind::Sech: return "sech";
    case EnvelopeKind::Lorentzian: return "lorentzian";
  }
  return "unknown";
}

/// Pulse envelope shape. For the smooth shapes the width is
/// `width_factor * tau`; the default 0.125 puts the pulse edges at
/// exp(-8), 1/cosh(4) and 1/17 of the peak for Gaussian, sech and Lorentzian.
struct Envelope {
  EnvelopeKind kind = EnvelopeKind::Gaussian;
  double width_factor = 0.125;

  static Envelope square() { return {EnvelopeKind::Square, 0.0}; }
  static Envelope gaussian(double sigma_factor = 0.125) {
    return {EnvelopeKind::Gaussian, sigma_factor};
  }
  static Envelope sech(double width_factor = 0.125) { return {EnvelopeKind::Sech, width_factor}; }
  static Envelope lorentzian(double width_factor = 0.125) {
    return {EnvelopeKind::Lorentzian, width_factor};
  }
};

/// Everything that defines the driving field E(t) = Omega(t) cos(omega t + phi)
/// on [0, tau], plus the atomic transition frequency.
struct PulseParams {
  double omega = 1.0;    // carrier angular frequency
  double omega_c = 0.2;  // transition angular frequency
  double omega0 = 0.1;   // peak Rabi frequency
  double phi = 0.0;      // carrier-envelope phase
  double cycles = 3.0;   // tau = 2 pi cycles / omega
  Envelope envelope = Envelope::gaussian();

  double tau() const { return 2.0 * std::numbers::pi * cycles / omega; }
  double width() const { return envelope.width_factor * tau(); }
};

inline void validate(const PulseParams& p) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (!(p.omega > 0.0) || !std::isfinite(p.omega)) fail("omega must be positive");
  if (!(p.omega0 >= 0.0) || !std::isfinite(p.omega0)) fail("omega0 must be non-negative");
  if (!std::isfinite(p.omega_c)) fail("omega_c must be finite");
  if (!std::isfinite(p.phi)) fail("phi must be finite");
  if (!(p.cycles > 0.0) || !std::isfinite(p.cycles)) fail("cycles must be positive");
  if (p.envelope.kind != EnvelopeKind::Square) {
    const double wf = p.envelope.width_factor;
    if (!(wf > 0.0) || !std::isfinite(wf)) fail("envelope width factor must be positive");
    if (p.envelope.kind == EnvelopeKind::Gaussian && wf > 0.25)
      fail("gaussian sigma factor must not exceed 0.25");
  }
}

/// Rabi frequency Omega(t). Zero outside [0, tau].
inline double envelope_at(const PulseParams& p, double t) {
  const double tau = p.tau();
  if (t < 0.0 || t > tau) return 0.0;
  if (p.envelope.kind == EnvelopeKind::Square) return p.omega0;
  const double x = (t - 0.5 * tau) / p.width();
  switch (p.envelope.kind) {
    case EnvelopeKind::Gaussian: return p.omega0 * std::exp(-0.5 * x * x);
    case EnvelopeKind::Sech: return p.omega0 / std::cosh(x);
    case EnvelopeKind::Lorentzian: return p.omega0 / (1.0 + x * x);
    case EnvelopeKind::Square: break;
  }
  return p.omega0;
}

inline double field_at(const PulseParams& p, double t) {
  return envelope_at(p, t) * std::cos(p.omega * t + p.phi);
}

}  // namespace fewcycle
