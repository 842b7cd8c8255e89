#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fewcycle/approx.hpp"
#include "fewcycle/error.hpp"
#include "fewcycle/exact_solver.hpp"
#include "fewcycle/pulse.hpp"
#include "fewcycle/trajectory.hpp"

namespace fewcycle {

/// ||approx - exact|| / ||exact|| with trapezoid weights; a sample masked in
/// either trajectory is dropped from both norms.
inline double relative_l2_error(const ComplexTrajectory& approx, const ComplexTrajectory& exact) {
  if (approx.samples.size() != exact.samples.size() || approx.t0 != exact.t0 || approx.t1 != exact.t1)
    throw Error(ErrorCode::GridMismatch, "trajectories live on different grids");
  const std::size_t k = exact.intervals();
  const double h = exact.step();
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n <= k; ++n) {
    if (approx.is_masked(n) || exact.is_masked(n)) continue;
    const double w = (n == 0 || n == k) ? 0.5 * h : h;
    num += w * std::norm(approx.samples[n] - exact.samples[n]);
    den += w * std::norm(exact.samples[n]);
  }
  if (!(den > 0.0)) throw Error(ErrorCode::ZeroNorm, "reference trajectory has zero norm");
  return std::sqrt(num / den);
}

/// Left-hand side of the far-off-resonance condition. One-sided:
/// (omega/omega_c)^2 + (Omega0/omega)^2. Two-sided replaces each term by the
/// smaller of the ratio squared and its inverse squared.
inline double applicability(const PulseParams& p, bool two_sided) {
  if (!(p.omega > 0.0) || !(p.omega_c > 0.0))
    throw Error(ErrorCode::InvalidArgument, "applicability needs positive omega and omega_c");
  const double rc = p.omega_c / p.omega;
  const double rf = p.omega0 / p.omega;
  if (!two_sided) {
    if (!(p.omega0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "omega0 must be non-negative");
    return 1.0 / (rc * rc) + rf * rf;
  }
  if (!(p.omega0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "two-sided score needs omega0 > 0");
  return std::min(rc * rc, 1.0 / (rc * rc)) + std::min(rf * rf, 1.0 / (rf * rf));
}

enum class Method { F0, F1Closed, F1Exact, FInf, Rwa, ZSeries };

struct MethodSet {
  bool f0 = true, f1_closed = true, f1_exact = true, finf = true, rwa = false, zseries = false;

  static MethodSet none() { return {false, false, false, false, false, false}; }
  bool has(Method m) const {
    switch (m) {
      case Method::F0: return f0;
      case Method::F1Closed: return f1_closed;
      case Method::F1Exact: return f1_exact;
      case Method::FInf: return finf;
      case Method::Rwa: return rwa;
      case Method::ZSeries: return zseries;
    }
    return false;
  }
};

/// Cells with more than this fraction of masked exact-f samples are flagged.
inline constexpr double kMaskedFlagFraction = 0.05;

struct SurfaceCell {
  double x = 0.0;  // Omega0 / omega
  double y = 0.0;  // omega_c / omega
  double err_f0 = std::numeric_limits<double>::quiet_NaN();
  double err_f1_closed = std::numeric_limits<double>::quiet_NaN();
  double err_f1_exact = std::numeric_limits<double>::quiet_NaN();
  double err_finf = std::numeric_limits<double>::quiet_NaN();
  cplx lambda{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  bool lambda_converged = false;
  std::vector<std::string> flags;

  double error(Method m) const {
    switch (m) {
      case Method::F0: return err_f0;
      case Method::F1Closed: return err_f1_closed;
      case Method::F1Exact: return err_f1_exact;
      case Method::FInf: return err_finf;
      default: return std::numeric_limits<double>::quiet_NaN();
    }
  }
};

/// Relative L2 errors over the (Omega0/omega, omega_c/omega) plane.
/// Cells are stored row-major, y outer and x inner.
struct ErrorSurface {
  std::vector<double> x_axis;
  std::vector<double> y_axis;
  std::vector<SurfaceCell> cells;
  PulseParams meta;
  std::size_t intervals = 0;  // 0: per-cell auto grid
  SolverSettings solver;

  const SurfaceCell& at(std::size_t ix, std::size_t iy) const { return cells[iy * x_axis.size() + ix]; }
};

inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t n = 0; n < count; ++n)
    out[n] = n + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(n) / static_cast<double>(count - 1);
  return out;
}

inline PulseParams cell_params(const PulseParams& tmpl, double x, double y) {
  PulseParams p = tmpl;
  p.omega0 = x * tmpl.omega;
  p.omega_c = y * tmpl.omega;
  return p;
}

/// Runs the exact solver and every requested approximation for one cell.
/// Failures are recorded as flags; they never propagate.
inline SurfaceCell compute_cell(const PulseParams& tmpl, double x, double y, const MethodSet& methods,
                                const SolverSettings& settings) {
  SurfaceCell cell;
  cell.x = x;
  cell.y = y;
  const PulseParams p = cell_params(tmpl, x, y);
  auto flag = [&](const std::string& what, const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    cell.flags.push_back(what + ":" + (err ? std::string(to_string(err->code())) : std::string("exception")));
  };

  std::size_t k = 0;
  ExactSolution exact;
  try {
    k = resolve_intervals(p, settings.intervals);
    SolverSettings s = settings;
    s.intervals = k;
    exact = solve_exact(p, s);
  } catch (const std::exception& e) {
    flag("exact", e);
    return cell;
  }
  if (static_cast<double>(exact.f.masked_count()) > kMaskedFlagFraction * static_cast<double>(exact.f.samples.size()))
    cell.flags.push_back("masked");

  auto measure = [&](const char* name, double& slot, auto&& build) {
    try {
      slot = relative_l2_error(build(), exact.f);
    } catch (const std::exception& e) {
      flag(name, e);
    }
  };
  if (methods.f0) measure("f0", cell.err_f0, [&] { return f0(p, k); });
  if (methods.f1_closed) measure("f1closed", cell.err_f1_closed, [&] { return f1_closed(p, k); });
  if (methods.f1_exact) measure("f1exact", cell.err_f1_exact, [&] { return solve_f1_exact(p, k); });
  if (methods.finf) {
    try {
      const auto r = solve_lambda(p, k);
      cell.lambda = r.lambda;
      cell.lambda_converged = r.converged;
      if (!r.converged) {
        cell.flags.push_back("finf:NotConverged");
      } else {
        cell.err_finf = relative_l2_error(finfinity_at(ShiftedTheta::physical(p, k), r.lambda), exact.f);
      }
    } catch (const std::exception& e) {
      flag("finf", e);
    }
  }
  return cell;
}

/// Error surface over the Cartesian product of the two axes. Each cell is
/// an independent task written to its own slot, so the result does not
/// depend on `threads` or on scheduling.
inline ErrorSurface sweep(const PulseParams& tmpl, const std::vector<double>& x_grid,
                          const std::vector<double>& y_grid, const MethodSet& methods,
                          const SolverSettings& settings, unsigned threads = 1) {
  validate(tmpl);
  auto check_axis = [](const std::vector<double>& g, const char* name) {
    if (g.empty()) throw Error(ErrorCode::InvalidArgument, std::string(name) + " grid is empty");
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (!(g[n] > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(name) + " grid must be positive");
      if (n > 0 && !(g[n] > g[n - 1]))
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " grid must be strictly increasing");
    }
  };
  check_axis(x_grid, "x");
  check_axis(y_grid, "y");

  ErrorSurface surface;
  surface.x_axis = x_grid;
  surface.y_axis = y_grid;
  surface.meta = tmpl;
  surface.intervals = settings.intervals;
  surface.solver = settings;
  surface.cells.resize(x_grid.size() * y_grid.size());

  const std::size_t total = surface.cells.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      const std::size_t ix = idx % x_grid.size();
      const std::size_t iy = idx / x_grid.size();
      surface.cells[idx] = compute_cell(tmpl, x_grid[ix], y_grid[iy], methods, settings);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned n = 0; n < threads; ++n) pool.emplace_back(worker);
  }
  return surface;
}

using Point = std::pair<double, double>;
using Polyline = std::vector<Point>;

/// Level set of a node-valued scalar field on a rectilinear grid by marching
/// squares with linear interpolation along edges. `values` is row-major with
/// y outer. Saddles are resolved by the mean of the four corners. Segments
/// are chained into polylines: open ones (ending on the boundary or next to
/// a NaN node) first, then closed loops, which repeat their first point.
inline std::vector<Polyline> marching_squares(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                                              const std::vector<double>& values, double level) {
  const std::size_t nx = x_axis.size();
  const std::size_t ny = y_axis.size();
  if (values.size() != nx * ny) throw Error(ErrorCode::GridMismatch, "field size does not match axes");
  if (nx < 2 || ny < 2) return {};

  auto val = [&](std::size_t i, std::size_t j) { return values[j * nx + i]; };
  // edge keys: 2*(j*nx+i) is the horizontal edge (i,j)-(i+1,j),
  // 2*(j*nx+i)+1 the vertical edge (i,j)-(i,j+1)
  auto hkey = [&](std::size_t i, std::size_t j) { return 2 * (j * nx + i); };
  auto vkey = [&](std::size_t i, std::size_t j) { return 2 * (j * nx + i) + 1; };
  auto crossing = [&](std::size_t key) -> Point {
    const std::size_t cell = key / 2;
    const std::size_t i = cell % nx, j = cell / nx;
    const bool vertical = key % 2 == 1;
    const std::size_t i2 = vertical ? i : i + 1, j2 = vertical ? j + 1 : j;
    const double a = val(i, j), b = val(i2, j2);
    const double s = std::clamp((level - a) / (b - a), 0.0, 1.0);
    return {x_axis[i] + s * (x_axis[i2] - x_axis[i]), y_axis[j] + s * (y_axis[j2] - y_axis[j])};
  };

  std::vector<std::pair<std::size_t, std::size_t>> segments;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const double v00 = val(i, j), v10 = val(i + 1, j), v11 = val(i + 1, j + 1), v01 = val(i, j + 1);
      if (std::isnan(v00) || std::isnan(v10) || std::isnan(v11) || std::isnan(v01)) continue;
      const bool b0 = v00 >= level, b1 = v10 >= level, b2 = v11 >= level, b3 = v01 >= level;
      const std::size_t bottom = hkey(i, j), right = vkey(i + 1, j), top = hkey(i, j + 1), left = vkey(i, j);
      std::vector<std::size_t> edges;
      if (b0 != b1) edges.push_back(bottom);
      if (b1 != b2) edges.push_back(right);
      if (b2 != b3) edges.push_back(top);
      if (b3 != b0) edges.push_back(left);
      if (edges.size() == 2) {
        segments.emplace_back(edges[0], edges[1]);
      } else if (edges.size() == 4) {
        const bool centre = 0.25 * (v00 + v10 + v11 + v01) >= level;
        // corners 0 and 2 share a state; the centre decides whether they connect
        if (centre == b0) {
          segments.emplace_back(bottom, right);
          segments.emplace_back(top, left);
        } else {
          segments.emplace_back(left, bottom);
          segments.emplace_back(right, top);
        }
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> touching;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    touching[segments[s].first].push_back(s);
    touching[segments[s].second].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> lines;

  auto walk = [&](std::size_t seg, std::size_t from) {
    Polyline line{crossing(from)};
    std::size_t key = from;
    while (true) {
      used[seg] = true;
      key = segments[seg].first == key ? segments[seg].second : segments[seg].first;
      line.push_back(crossing(key));
      std::size_t next_seg = segments.size();
      for (std::size_t s : touching[key])
        if (!used[s]) next_seg = s;
      if (next_seg == segments.size()) break;
      seg = next_seg;
    }
    lines.push_back(std::move(line));
  };
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    if (touching[segments[s].first].size() == 1) walk(s, segments[s].first);
    else if (touching[segments[s].second].size() == 1) walk(s, segments[s].second);
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) walk(s, segments[s].first);
  return lines;
}

/// Contour of one method's error at `level` (a fraction, e.g. 0.10).
/// A level that is never crossed gives an empty list.
inline std::vector<Polyline> extract_contour(const ErrorSurface& surface, Method method, double level = 0.10) {
  std::vector<double> values(surface.cells.size());
  for (std::size_t n = 0; n < values.size(); ++n) values[n] = surface.cells[n].error(method);
  return marching_squares(surface.x_axis, surface.y_axis, values, level);
}

}  // namespace fewcycle
