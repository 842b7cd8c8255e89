#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fewcycle/error.hpp"

namespace fewcycle {

using cplx = std::complex<double>;

/// Complex function of time sampled on a uniform grid of K+1 points covering
/// [t0, t1], endpoints included. `masked` is either empty (nothing masked)
/// or holds one 0/1 flag per sample.
struct ComplexTrajectory {
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<cplx> samples;
  std::vector<std::uint8_t> masked;

  std::size_t intervals() const { return samples.empty() ? 0 : samples.size() - 1; }
  double step() const { return (t1 - t0) / static_cast<double>(intervals()); }
  double time(std::size_t i) const {
    return i == intervals() ? t1 : t0 + static_cast<double>(i) * step();
  }
  bool is_masked(std::size_t i) const { return !masked.empty() && masked[i] != 0; }
  std::size_t masked_count() const {
    std::size_t n = 0;
    for (auto m : masked) n += (m != 0);
    return n;
  }
};

/// Uniform time grid over [0, tau] with `intervals` subintervals.
struct TimeGrid {
  double tau = 0.0;
  std::size_t intervals = 0;

  TimeGrid(double tau_, std::size_t k) : tau(tau_), intervals(k) {
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 intervals");
    if (!(tau_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid length must be positive");
  }

  std::size_t size() const { return intervals + 1; }
  double step() const { return tau / static_cast<double>(intervals); }
  double time(std::size_t i) const {
    return i == intervals ? tau : static_cast<double>(i) * step();
  }

  ComplexTrajectory make(std::vector<cplx> samples) const {
    ComplexTrajectory out;
    out.t0 = 0.0;
    out.t1 = tau;
    out.samples = std::move(samples);
    return out;
  }
};

}  // namespace fewcycle
