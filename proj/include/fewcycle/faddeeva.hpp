#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace fewcycle {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z).
///
/// Poppe & Wijers scheme: a Maclaurin series near the origin, a Laplace
/// continued fraction far away, and Gautschi's truncated-Taylor acceleration
/// of the continued fraction in between. About 14 significant digits over
/// the whole plane; the lower half-plane goes through the reflection
/// w(z) = 2 exp(-z^2) - w(-z).
inline std::complex<double> faddeeva_w(std::complex<double> z) {
  constexpr double factor = 1.12837916709551257388;  // 2 / sqrt(pi)
  constexpr double max_exp = 708.503061461606;
  const double xi = z.real();
  const double yi = z.imag();
  const double xabs = std::abs(xi);
  const double yabs = std::abs(yi);
  const double x = xabs / 6.3;
  const double y = yabs / 4.4;

  double qrho = x * x + y * y;
  double xquad = xabs * xabs - yabs * yabs;
  const double yquad = 2.0 * xabs * yabs;
  const bool near_origin = qrho < 0.085264;

  double u = 0.0, v = 0.0, u2 = 0.0, v2 = 0.0;
  if (near_origin) {
    qrho = (1.0 - 0.85 * y) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -factor * (xsum * yabs + ysum * xabs) + 1.0;
    const double v1 = factor * (xsum * xabs - ysum * yabs);
    const double daux = std::exp(-xquad);
    u2 = daux * std::cos(yquad);
    v2 = -daux * std::sin(yquad);
    u = u1 * u2 - v1 * v2;
    v = u1 * v2 + v1 * u2;
  } else {
    double h = 0.0, h2 = 0.0, qlambda = 0.0;
    int kapn = 0, nu = 0;
    if (qrho > 1.0) {
      qrho = std::sqrt(qrho);
      nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
      qrho = (1.0 - y) * std::sqrt(1.0 - qrho);
      h = 1.88 * qrho;
      h2 = 2.0 * h;
      kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
      nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const bool taylor = h > 0.0;
    if (taylor) qlambda = std::pow(h2, kapn);
    double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
    for (int n = nu; n >= 0; --n) {
      const double np1 = n + 1.0;
      double tx = yabs + h + np1 * rx;
      double ty = xabs - np1 * ry;
      const double c = 0.5 / (tx * tx + ty * ty);
      rx = c * tx;
      ry = c * ty;
      if (taylor && n <= kapn) {
        tx = qlambda + sx;
        sx = rx * tx - ry * sy;
        sy = ry * tx + rx * sy;
        qlambda /= h2;
      }
    }
    if (taylor) {
      u = factor * sx;
      v = factor * sy;
    } else {
      u = factor * rx;
      v = factor * ry;
    }
    if (yabs == 0.0) u = std::exp(-xabs * xabs);
  }

  if (yi < 0.0) {
    if (near_origin) {
      u2 *= 2.0;
      v2 *= 2.0;
    } else {
      xquad = -xquad;
      if (xquad > max_exp) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
      }
      const double w1 = 2.0 * std::exp(xquad);
      u2 = w1 * std::cos(yquad);
      v2 = -w1 * std::sin(yquad);
    }
    u = u2 - u;
    v = v2 - v;
    if (xi > 0.0) v = -v;
  } else if (xi < 0.0) {
    v = -v;
  }
  return {u, v};
}

/// erfc(z) exp(z^2) without the overflow of the two separate factors;
/// accurate for Re z >= 0.
inline std::complex<double> erfcx_complex(std::complex<double> z) {
  return faddeeva_w(std::complex<double>(-z.imag(), z.real()));
}

/// Complex error function. Small arguments use the Maclaurin series (no
/// cancellation against 1); elsewhere erf(z) = 1 - exp(-z^2) w(iz) evaluated
/// in the half-plane Re z >= 0 and reflected by oddness.
inline std::complex<double> erf_complex(std::complex<double> z) {
  using C = std::complex<double>;
  if (std::abs(z) < 0.5) {
    const C z2 = z * z;
    C term = z;
    C sum = z;
    for (int n = 1; n < 30; ++n) {
      term *= -z2 / static_cast<double>(n);
      const C add = term / static_cast<double>(2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum * (2.0 / std::sqrt(std::numbers::pi));
  }
  const bool flip = z.real() < 0.0;
  const C za = flip ? -z : z;
  const C r = 1.0 - std::exp(-za * za) * erfcx_complex(za);
  return flip ? -r : r;
}

}  // namespace fewcycle
