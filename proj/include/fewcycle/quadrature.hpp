#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fewcycle/error.hpp"

namespace fewcycle::quad {

/// All K+1 prefix integrals of uniformly sampled data in one pass.
///
/// Even nodes get plain composite Simpson. An odd node j adds the single
/// panel [j-1, j] integrated with the cubic through its four nearest
/// neighbours, so every prefix carries an O(h^4) global error.
template <typename T>
std::vector<T> cumulative_simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "cumulative_simpson needs at least 3 samples");
  const std::size_t k = n - 1;
  std::vector<T> out(n, T{});
  for (std::size_t j = 2; j <= k; j += 2)
    out[j] = out[j - 2] + (h / 3.0) * (f[j - 2] + 4.0 * f[j - 1] + f[j]);

  for (std::size_t j = 1; j <= k; j += 2) {
    T panel{};
    if (k == 2) {
      panel = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    } else if (j == 1) {
      panel = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else if (j == k) {
      panel = (h / 24.0) * (f[k - 3] - 5.0 * f[k - 2] + 19.0 * f[k - 1] + 9.0 * f[k]);
    } else {
      panel = (h / 24.0) * (-f[j - 2] + 13.0 * f[j - 1] + 13.0 * f[j] - f[j + 1]);
    }
    out[j] = out[j - 1] + panel;
  }
  return out;
}

template <typename T>
std::vector<T> cumulative_simpson(const std::vector<T>& f, double h) {
  return cumulative_simpson(std::span<const T>(f), h);
}

/// Integral over the whole grid.
template <typename T>
T simpson(std::span<const T> f, double h) {
  return cumulative_simpson(f, h).back();
}

template <typename T>
T simpson(const std::vector<T>& f, double h) {
  return simpson(std::span<const T>(f), h);
}

/// First derivative of uniformly sampled data, fourth order everywhere:
/// central stencils inside, one-sided stencils on the two outermost nodes.
template <typename T>
std::vector<T> derivative(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw Error(ErrorCode::InvalidArgument, "derivative needs at least 5 samples");
  const std::size_t k = n - 1;
  const double s = 1.0 / (12.0 * h);
  std::vector<T> d(n);
  d[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 <= k; ++i)
    d[i] = s * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  d[k - 1] = s * (3.0 * f[k] + 10.0 * f[k - 1] - 18.0 * f[k - 2] + 6.0 * f[k - 3] - f[k - 4]);
  d[k] = s * (25.0 * f[k] - 48.0 * f[k - 1] + 36.0 * f[k - 2] - 16.0 * f[k - 3] + 3.0 * f[k - 4]);
  return d;
}

template <typename T>
std::vector<T> derivative(const std::vector<T>& f, double h) {
  return derivative(std::span<const T>(f), h);
}

}  // namespace fewcycle::quad
