#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fewcycle/analysis.hpp"
#include "oracles.hpp"

using namespace fewcycle;
using C = std::complex<double>;

namespace {

ComplexTrajectory constant(double tau, std::size_t k, C v) {
  return TimeGrid(tau, k).make(std::vector<C>(k + 1, v));
}

}  // namespace

TEST(RelativeL2, ConstantOffsets) {
  EXPECT_NEAR(relative_l2_error(constant(2.0, 10, 1.1), constant(2.0, 10, 1.0)), 0.1, 1e-15);
  EXPECT_EQ(relative_l2_error(constant(2.0, 10, C(3, 4)), constant(2.0, 10, C(3, 4))), 0.0);
  EXPECT_DOUBLE_EQ(relative_l2_error(constant(2.0, 10, C(0, 1)), constant(2.0, 10, C(1, 0))), std::sqrt(2.0));
}

TEST(RelativeL2, MatchesIndependentTrapezoid) {
  const auto p = oracle::benchmark();
  const std::size_t k = 400;
  const TimeGrid grid(p.tau(), k);
  std::vector<C> a(k + 1), e(k + 1);
  for (std::size_t n = 0; n <= k; ++n) {
    const double t = grid.time(n);
    e[n] = C(std::sin(t), std::cos(0.3 * t));
    a[n] = e[n] + C(0.01 * t, -0.02);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    num += 0.5 * grid.step() * (std::norm(a[n] - e[n]) + std::norm(a[n + 1] - e[n + 1]));
    den += 0.5 * grid.step() * (std::norm(e[n]) + std::norm(e[n + 1]));
  }
  EXPECT_NEAR(relative_l2_error(grid.make(a), grid.make(e)), std::sqrt(num / den), 1e-12);
}

TEST(RelativeL2, Errors) {
  try {
    relative_l2_error(constant(2.0, 10, 1.0), constant(2.0, 12, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
  try {
    relative_l2_error(constant(2.0, 10, 1.0), constant(2.0, 10, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroNorm);
  }
}

TEST(RelativeL2, MaskedSamplesAreSkippedPairwise) {
  auto exact = constant(2.0, 10, 1.0);
  auto approx = constant(2.0, 10, 1.0);
  approx.samples[5] = 1e6;
  exact.masked.assign(11, 0);
  exact.masked[5] = 1;
  EXPECT_EQ(relative_l2_error(approx, exact), 0.0);
  std::swap(approx.masked, exact.masked);
  EXPECT_EQ(relative_l2_error(approx, exact), 0.0);
}

TEST(Applicability, Values) {
  PulseParams p;
  p.omega = 1.0;
  p.omega_c = 10.0;
  p.omega0 = 0.1;
  EXPECT_NEAR(applicability(p, false), 0.02, 1e-15);
  p.omega_c = 0.1;
  p.omega0 = 0.1;
  EXPECT_NEAR(applicability(p, true), 0.02, 1e-15);
  p.omega_c = 1.0;
  p.omega0 = 1.0;
  EXPECT_DOUBLE_EQ(applicability(p, true), 2.0);
  p.omega_c = 0.0;
  EXPECT_THROW(applicability(p, false), Error);
}

TEST(Sweep, SingleCellMatchesModuleCalls) {
  const auto p = oracle::benchmark();
  SolverSettings s;
  const auto surface = sweep(p, {0.1}, {0.2}, MethodSet{}, s);
  ASSERT_EQ(surface.cells.size(), 1u);
  const auto& cell = surface.at(0, 0);
  const std::size_t k = auto_intervals(p);
  s.intervals = k;
  const auto exact = solve_exact(p, s);
  EXPECT_EQ(cell.err_f0, relative_l2_error(f0(p, k), exact.f));
  EXPECT_EQ(cell.err_f1_closed, relative_l2_error(f1_closed(p, k), exact.f));
  EXPECT_EQ(cell.err_f1_exact, relative_l2_error(solve_f1_exact(p, k), exact.f));
  EXPECT_EQ(cell.err_finf, relative_l2_error(finfinity(p, k), exact.f));
  EXPECT_TRUE(cell.lambda_converged);
  EXPECT_TRUE(cell.flags.empty());
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const auto p = oracle::benchmark();
  const auto xs = linear_grid(0.05, 0.6, 3);
  const auto ys = linear_grid(0.2, 3.0, 3);
  SolverSettings s;
  s.intervals = 1024;
  const auto a = sweep(p, xs, ys, MethodSet{}, s, 1);
  const auto b = sweep(p, xs, ys, MethodSet{}, s, 4);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t n = 0; n < a.cells.size(); ++n) {
    for (Method m : {Method::F0, Method::F1Closed, Method::F1Exact, Method::FInf}) {
      const double u = a.cells[n].error(m), v = b.cells[n].error(m);
      EXPECT_TRUE(u == v || (std::isnan(u) && std::isnan(v)));
    }
    EXPECT_EQ(a.cells[n].flags, b.cells[n].flags);
  }
}

TEST(Sweep, LayoutIsRowMajorInY) {
  const auto surface = sweep(oracle::benchmark(), {0.1, 0.2}, {0.5, 1.0, 1.5}, MethodSet::none(), SolverSettings{});
  ASSERT_EQ(surface.cells.size(), 6u);
  EXPECT_EQ(surface.at(1, 2).x, 0.2);
  EXPECT_EQ(surface.at(1, 2).y, 1.5);
  EXPECT_TRUE(std::isnan(surface.at(0, 0).err_f0));
}

TEST(Sweep, FlagsFailedMethods) {
  SolverSettings s;
  s.intervals = 16;  // too coarse for the carrier
  const auto surface = sweep(oracle::benchmark(), {0.1}, {0.2}, MethodSet{}, s);
  const auto& cell = surface.at(0, 0);
  EXPECT_TRUE(std::isnan(cell.err_f0));
  EXPECT_TRUE(std::isnan(cell.err_finf));
  const std::vector<std::string> expected = {"f0:GridTooCoarse", "f1closed:GridTooCoarse", "f1exact:GridTooCoarse",
                                             "finf:GridTooCoarse"};
  EXPECT_EQ(cell.flags, expected);
}

TEST(Sweep, RejectsInvalidGrids) {
  const auto p = oracle::benchmark();
  EXPECT_THROW(sweep(p, {}, {0.2}, MethodSet{}, {}), Error);
  EXPECT_THROW(sweep(p, {0.1, 0.1}, {0.2}, MethodSet{}, {}), Error);
  EXPECT_THROW(sweep(p, {0.2, 0.1}, {0.2}, MethodSet{}, {}), Error);
  EXPECT_THROW(sweep(p, {0.1}, {-0.2}, MethodSet{}, {}), Error);
}

TEST(LinearGrid, EndpointsExact) {
  const auto g = linear_grid(0.02, 5.0, 40);
  EXPECT_EQ(g.front(), 0.02);
  EXPECT_EQ(g.back(), 5.0);
  EXPECT_EQ(g.size(), 40u);
  EXPECT_THROW(linear_grid(0, 1, 0), Error);
}

TEST(Contour, ConstantSurfacesHaveNoContour) {
  const std::vector<double> x = {0, 1, 2}, y = {0, 1, 2};
  EXPECT_TRUE(marching_squares(x, y, std::vector<double>(9, 0.05), 0.1).empty());
  EXPECT_TRUE(marching_squares(x, y, std::vector<double>(9, 0.5), 0.1).empty());
}

TEST(Contour, LinearInXGivesVerticalLine) {
  const auto x = linear_grid(0.0, 0.3, 7);
  const auto y = linear_grid(0.0, 1.0, 5);
  std::vector<double> v;
  for (double yy : y)
    for (double xx : x) v.push_back(xx + 0.0 * yy);
  const auto lines = marching_squares(x, y, v, 0.1);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].size(), y.size());
  for (const auto& [px, py] : lines[0]) EXPECT_NEAR(px, 0.1, 1e-12);
}

TEST(Contour, PointsStayInsideBoundingBox) {
  const auto x = linear_grid(0.02, 1.0, 12);
  const auto y = linear_grid(0.02, 5.0, 9);
  std::vector<double> v;
  for (double yy : y)
    for (double xx : x) v.push_back(std::sin(3 * xx) * std::cos(yy));
  for (const auto& line : marching_squares(x, y, v, 0.1))
    for (const auto& [px, py] : line) {
      EXPECT_GE(px, x.front());
      EXPECT_LE(px, x.back());
      EXPECT_GE(py, y.front());
      EXPECT_LE(py, y.back());
    }
}

TEST(Contour, BumpGivesClosedLoop) {
  const auto x = linear_grid(-1.0, 1.0, 21);
  const auto y = linear_grid(-1.0, 1.0, 21);
  std::vector<double> v;
  for (double yy : y)
    for (double xx : x) v.push_back(xx * xx + yy * yy);
  const auto lines = marching_squares(x, y, v, 0.25);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].front(), lines[0].back());
  for (const auto& [px, py] : lines[0]) EXPECT_NEAR(std::hypot(px, py), 0.5, 0.02);
}

TEST(Contour, NanCellsAreSkipped) {
  const std::vector<double> x = {0, 1, 2}, y = {0, 1};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(marching_squares(x, y, {0.0, 1.0, nan, 0.0, 1.0, nan}, 0.5).size() == 1);
  EXPECT_TRUE(marching_squares(x, y, {0.0, nan, 1.0, 0.0, nan, 1.0}, 0.5).empty());
}

TEST(Contour, ExtractsFromSurface) {
  ErrorSurface s;
  s.x_axis = {0.0, 0.2};
  s.y_axis = {1.0, 2.0};
  s.cells.resize(4);
  for (std::size_t n = 0; n < 4; ++n) s.cells[n].err_finf = s.x_axis[n % 2];
  const auto lines = extract_contour(s, Method::FInf);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_NEAR(lines[0][0].first, 0.1, 1e-15);
  EXPECT_TRUE(extract_contour(s, Method::F0).empty());
}
