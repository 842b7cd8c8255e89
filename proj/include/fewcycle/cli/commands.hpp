#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fewcycle/analysis.hpp"
#include "fewcycle/approx.hpp"
#include "fewcycle/cli/config.hpp"
#include "fewcycle/cli/csv.hpp"
#include "fewcycle/exact_solver.hpp"

namespace fewcycle::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3 };

inline const std::vector<Method>& figure_methods() {
  static const std::vector<Method> m = {Method::F0, Method::F1Closed, Method::F1Exact, Method::FInf};
  return m;
}

inline const char* method_name(Method m) {
  switch (m) {
    case Method::F0: return "f0";
    case Method::F1Closed: return "f1closed";
    case Method::F1Exact: return "f1exact";
    case Method::FInf: return "finf";
    case Method::Rwa: return "rwa";
    case Method::ZSeries: return "zseries";
  }
  return "?";
}

inline std::string csv_preamble(const char* command, const RunConfig& cfg) {
  return std::string("# command: ") + command + "\n# config: " + cfg.canonical() + "\n";
}

/// Time series of the exact solution plus one f column pair per method.
inline std::string render_simulate(const RunConfig& cfg) {
  const PulseParams p = cfg.pulse();
  SolverSettings s = cfg.solver();
  const std::size_t k = resolve_intervals(p, s.intervals);
  s.intervals = k;
  const auto methods = cfg.methods(figure_methods());
  const auto exact = solve_exact(p, s);

  std::vector<ComplexTrajectory> columns;
  for (Method m : methods) {
    switch (m) {
      case Method::F0: columns.push_back(f0(p, k)); break;
      case Method::F1Closed: columns.push_back(f1_closed(p, k)); break;
      case Method::F1Exact: columns.push_back(solve_f1_exact(p, k)); break;
      case Method::FInf: columns.push_back(finfinity(p, k)); break;
      case Method::Rwa: columns.push_back(solve_rwa(p, k).f); break;
      case Method::ZSeries: {
        const auto order = cfg.count("z_order");
        if (order > static_cast<std::size_t>(kMaxZOrder)) throw ConfigError("z_order must lie in [0, 6]");
        columns.push_back(z_series(p, k, static_cast<int>(order)).f);
        break;
      }
    }
  }

  std::ostringstream os;
  os << csv_preamble("simulate", cfg);
  os << "t,re_C,im_C,re_D,im_D,re_f,im_f,pop_c,masked";
  for (Method m : methods) os << ",re_f_" << method_name(m) << ",im_f_" << method_name(m);
  os << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 0; n <= k; ++n) {
    const cplx c = exact.c.samples[n], d = exact.d.samples[n];
    const bool masked = exact.f.is_masked(n);
    const cplx f = masked ? cplx(nan, nan) : exact.f.samples[n];
    os << format_double(exact.c.time(n)) << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << ','
       << format_double(d.real()) << ',' << format_double(d.imag()) << ',' << format_double(f.real()) << ','
       << format_double(f.imag()) << ',' << format_double(std::norm(c)) << ',' << (masked ? 1 : 0);
    for (const auto& col : columns) {
      const cplx v = col.is_masked(n) ? cplx(nan, nan) : col.samples[n];
      os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    }
    os << '\n';
  }
  return os.str();
}

inline std::string render_surface(const ErrorSurface& surface) {
  std::ostringstream os;
  os << "omega0_ratio,omegac_ratio,err_f0,err_f1_closed,err_f1_exact,err_finf,err_finf_pct,lambda_re,lambda_im,"
        "lambda_converged,flags\n";
  for (const auto& c : surface.cells) {
    std::string flags;
    for (const auto& f : c.flags) flags += (flags.empty() ? "" : ";") + f;
    os << format_double(c.x) << ',' << format_double(c.y) << ',' << format_double(c.err_f0) << ','
       << format_double(c.err_f1_closed) << ',' << format_double(c.err_f1_exact) << ','
       << format_double(c.err_finf) << ',' << format_double(100.0 * c.err_finf) << ','
       << format_double(c.lambda.real()) << ',' << format_double(c.lambda.imag()) << ','
       << (c.lambda_converged ? 1 : 0) << ',' << flags << '\n';
  }
  return os.str();
}

inline ErrorSurface run_sweep(const RunConfig& cfg) {
  const PulseParams tmpl = cfg.pulse();
  const SolverSettings s = cfg.solver();
  MethodSet set = MethodSet::none();
  for (Method m : cfg.methods(figure_methods())) {
    switch (m) {
      case Method::F0: set.f0 = true; break;
      case Method::F1Closed: set.f1_closed = true; break;
      case Method::F1Exact: set.f1_exact = true; break;
      case Method::FInf: set.finf = true; break;
      default: throw ConfigError(std::string("sweep does not support method '") + method_name(m) + "'");
    }
  }
  const auto xs = linear_grid(cfg.number("x_min"), cfg.number("x_max"), cfg.count("x_count"));
  const auto ys = linear_grid(cfg.number("y_min"), cfg.number("y_max"), cfg.count("y_count"));
  try {
    return sweep(tmpl, xs, ys, set, s, cfg.threads());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw ConfigError(e.what());
    throw;
  }
}

inline std::string render_sweep(const RunConfig& cfg) {
  return csv_preamble("sweep", cfg) + render_surface(run_sweep(cfg));
}

struct LambdaReport {
  LambdaResult result;
  cplx alpha0{};
};

inline LambdaReport run_lambda(const RunConfig& cfg) {
  const PulseParams p = cfg.pulse();
  const std::size_t k = resolve_intervals(p, cfg.solver().intervals);
  return {solve_lambda(p, k), alpha0(p, k).value};
}

inline std::string format_lambda(const LambdaReport& r) {
  std::ostringstream os;
  os << "lambda_re=" << format_double(r.result.lambda.real()) << " lambda_im=" << format_double(r.result.lambda.imag())
     << " residual=" << format_double(r.result.residual) << " iterations=" << r.result.iterations
     << " converged=" << (r.result.converged ? 1 : 0) << " alpha0_re=" << format_double(r.alpha0.real())
     << " alpha0_im=" << format_double(r.alpha0.imag()) << '\n';
  return os.str();
}

/// Rebuilds the grid of one error column from a sweep CSV.
inline ErrorSurface read_surface(std::istream& in, Method method) {
  CsvTable table;
  try {
    table = read_csv(in);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed surface CSV: ") + e.what());
  }
  static const std::map<Method, const char*> column = {
      {Method::F0, "err_f0"}, {Method::F1Closed, "err_f1_closed"}, {Method::F1Exact, "err_f1_exact"}, {Method::FInf, "err_finf"}};
  const auto it = column.find(method);
  if (it == column.end()) throw ConfigError(std::string("no error column for method '") + method_name(method) + "'");
  const auto cx = table.column("omega0_ratio"), cy = table.column("omegac_ratio"), ce = table.column(it->second);
  if (cx < 0 || cy < 0 || ce < 0) throw ConfigError(std::string("surface CSV lacks a required column (") + it->second + ")");

  struct Row { double x, y, e; };
  std::vector<Row> rows;
  try {
    for (const auto& r : table.rows) rows.push_back({parse_double(r[cx]), parse_double(r[cy]), parse_double(r[ce])});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed surface CSV: ") + e.what());
  }
  ErrorSurface s;
  for (const auto& r : rows) {
    s.x_axis.push_back(r.x);
    s.y_axis.push_back(r.y);
  }
  for (auto* axis : {&s.x_axis, &s.y_axis}) {
    std::sort(axis->begin(), axis->end());
    axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
  }
  s.cells.resize(s.x_axis.size() * s.y_axis.size());
  for (std::size_t n = 0; n < s.cells.size(); ++n) {
    s.cells[n].x = s.x_axis[n % s.x_axis.size()];
    s.cells[n].y = s.y_axis[n / s.x_axis.size()];
  }
  for (const auto& r : rows) {
    const auto ix = std::lower_bound(s.x_axis.begin(), s.x_axis.end(), r.x) - s.x_axis.begin();
    const auto iy = std::lower_bound(s.y_axis.begin(), s.y_axis.end(), r.y) - s.y_axis.begin();
    SurfaceCell& cell = s.cells[static_cast<std::size_t>(iy) * s.x_axis.size() + static_cast<std::size_t>(ix)];
    switch (method) {
      case Method::F0: cell.err_f0 = r.e; break;
      case Method::F1Closed: cell.err_f1_closed = r.e; break;
      case Method::F1Exact: cell.err_f1_exact = r.e; break;
      default: cell.err_finf = r.e; break;
    }
  }
  return s;
}

inline std::string render_contour(const RunConfig& cfg) {
  const std::string path = cfg.get("in");
  if (path.empty()) throw ConfigError("contour needs an input surface (--in)");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read surface CSV '" + path + "'");
  const Method method = RunConfig::parse_method(cfg.get("method"));
  const double level = cfg.number("level");
  const auto surface = read_surface(in, method);
  const auto lines = extract_contour(surface, method, level);

  std::ostringstream os;
  os << csv_preamble("contour", cfg);
  os << "polyline_id,omega0_ratio,omegac_ratio\n";
  for (std::size_t id = 0; id < lines.size(); ++id)
    for (const auto& [x, y] : lines[id]) os << id << ',' << format_double(x) << ',' << format_double(y) << '\n';
  return os.str();
}

/// Runs one subcommand and maps failures onto exit codes: 2 for usage and
/// configuration problems, 3 for numerical failures.
inline int run_command(const std::string& command, const RunConfig& cfg, std::ostream& err) {
  try {
    if (command == "simulate") {
      write_atomic(cfg.get("out"), render_simulate(cfg));
    } else if (command == "sweep") {
      write_atomic(cfg.get("out"), render_sweep(cfg));
    } else if (command == "lambda") {
      const auto report = run_lambda(cfg);
      write_atomic(cfg.get("out"), format_lambda(report));
      if (!report.result.converged) {
        err << "error: frequency shift did not converge\n";
        return kNumerical;
      }
    } else if (command == "contour") {
      write_atomic(cfg.get("out"), render_contour(cfg));
    } else {
      err << "error: unknown command '" << command << "'\n";
      return kUsage;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kUsage : kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

}  // namespace fewcycle::cli
