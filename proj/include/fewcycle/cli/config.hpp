#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fewcycle/analysis.hpp"
#include "fewcycle/cli/csv.hpp"
#include "fewcycle/exact_solver.hpp"
#include "fewcycle/pulse.hpp"

namespace fewcycle::cli {

/// Bad configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueKind { Number, Count, Text };

struct KeySpec {
  const char* name;
  const char* fallback;
  ValueKind kind;
  const char* help;
  bool canonical = true;  // part of the embedded "# config:" line
};

inline const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = {
      {"omega", "1", ValueKind::Number, "carrier angular frequency"},
      {"omega0_ratio", "0.1", ValueKind::Number, "peak Rabi frequency over omega"},
      {"omegac_ratio", "0.2", ValueKind::Number, "transition frequency over omega"},
      {"phi", "0", ValueKind::Number, "carrier-envelope phase (rad)"},
      {"cycles", "3", ValueKind::Number, "carrier cycles across the pulse"},
      {"envelope", "gaussian", ValueKind::Text, "square | gaussian | sech | lorentzian"},
      {"width_factor", "0.125", ValueKind::Number, "envelope width as a fraction of tau"},
      {"intervals", "0", ValueKind::Count, "time-grid intervals (0 = automatic)"},
      {"rtol", "1e-10", ValueKind::Number, "solver relative tolerance"},
      {"atol", "1e-12", ValueKind::Number, "solver absolute tolerance"},
      {"max_steps", "5000000", ValueKind::Count, "solver step cap"},
      {"x_min", "0.02", ValueKind::Number, "sweep: smallest omega0_ratio"},
      {"x_max", "1", ValueKind::Number, "sweep: largest omega0_ratio"},
      {"x_count", "40", ValueKind::Count, "sweep: omega0_ratio points"},
      {"y_min", "0.02", ValueKind::Number, "sweep: smallest omegac_ratio"},
      {"y_max", "5", ValueKind::Number, "sweep: largest omegac_ratio"},
      {"y_count", "40", ValueKind::Count, "sweep: omegac_ratio points"},
      {"methods", "", ValueKind::Text, "comma list of f0,f1closed,f1exact,finf,rwa,zseries"},
      {"z_order", "2", ValueKind::Count, "z-series order (0..6)"},
      {"method", "finf", ValueKind::Text, "contour: method column"},
      {"level", "0.1", ValueKind::Number, "contour: error level (fraction)"},
      {"in", "", ValueKind::Text, "contour: input surface CSV"},
      {"out", "-", ValueKind::Text, "output path ('-' for stdout)", false},
      {"threads", "1", ValueKind::Text, "worker threads or 'auto'", false},
  };
  return keys;
}

inline const KeySpec* find_key(const std::string& name) {
  for (const auto& k : config_keys())
    if (name == k.name) return &k;
  return nullptr;
}

/// Flat key/value configuration. Values are kept canonical: numbers are
/// re-printed in shortest round-trip form, so "0.10" and "0.1" are equal.
class RunConfig {
 public:
  void set(const std::string& key, const std::string& raw) {
    const KeySpec* spec = find_key(key);
    if (!spec) throw ConfigError("unknown configuration key '" + key + "'");
    values_[key] = canonicalise(*spec, raw);
  }

  std::string get(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    const KeySpec* spec = find_key(key);
    if (!spec) throw ConfigError("unknown configuration key '" + key + "'");
    return spec->fallback;
  }

  double number(const std::string& key) const { return parse_double(get(key)); }
  std::size_t count(const std::string& key) const { return static_cast<std::size_t>(std::stoull(get(key))); }

  /// `key = value` lines; `#` starts a comment.
  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  /// Every canonical key in sorted order, defaults filled in.
  std::string canonical() const {
    std::map<std::string, std::string> all;
    for (const auto& k : config_keys())
      if (k.canonical) all[k.name] = get(k.name);
    std::string out;
    for (const auto& [k, v] : all) {
      if (!out.empty()) out += ' ';
      out += k + "=" + v;
    }
    return out;
  }

  PulseParams pulse() const {
    PulseParams p;
    p.omega = number("omega");
    p.omega0 = number("omega0_ratio") * p.omega;
    p.omega_c = number("omegac_ratio") * p.omega;
    p.phi = number("phi");
    p.cycles = number("cycles");
    const std::string env = get("envelope");
    const double wf = number("width_factor");
    if (env == "square") p.envelope = Envelope::square();
    else if (env == "gaussian") p.envelope = Envelope::gaussian(wf);
    else if (env == "sech") p.envelope = Envelope::sech(wf);
    else if (env == "lorentzian") p.envelope = Envelope::lorentzian(wf);
    else throw ConfigError("unknown envelope '" + env + "'");
    try {
      validate(p);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    return p;
  }

  SolverSettings solver() const {
    SolverSettings s;
    s.rtol = number("rtol");
    s.atol = number("atol");
    s.max_steps = count("max_steps");
    s.intervals = count("intervals");
    if (!(s.rtol > 0.0) || !(s.atol > 0.0)) throw ConfigError("tolerances must be positive");
    if (s.intervals == 1) throw ConfigError("intervals must be 0 (automatic) or at least 2");
    return s;
  }

  std::vector<Method> methods(const std::vector<Method>& fallback) const {
    const std::string raw = get("methods");
    if (raw.empty()) return fallback;
    std::vector<Method> out;
    for (const auto& name : split(raw, ',')) out.push_back(parse_method(name));
    return out;
  }

  unsigned threads() const {
    const std::string raw = get("threads");
    if (raw == "auto") return std::max(1u, std::thread::hardware_concurrency());
    try {
      const auto n = std::stoul(raw);
      if (n == 0) throw ConfigError("threads must be positive");
      return static_cast<unsigned>(n);
    } catch (const std::logic_error&) {
      throw ConfigError("threads must be a positive integer or 'auto'");
    }
  }

  static Method parse_method(const std::string& name) {
    if (name == "f0") return Method::F0;
    if (name == "f1closed") return Method::F1Closed;
    if (name == "f1exact") return Method::F1Exact;
    if (name == "finf") return Method::FInf;
    if (name == "rwa") return Method::Rwa;
    if (name == "zseries") return Method::ZSeries;
    throw ConfigError("unknown method '" + name + "'");
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::string canonicalise(const KeySpec& spec, const std::string& raw) {
    const std::string v = trim(raw);
    switch (spec.kind) {
      case ValueKind::Number:
        try {
          const double d = parse_double(v);
          if (!std::isfinite(d)) throw std::invalid_argument("non-finite");
          return format_double(d);
        } catch (const std::invalid_argument&) {
          throw ConfigError("key '" + std::string(spec.name) + "' needs a number, got '" + v + "'");
        }
      case ValueKind::Count:
        if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
          throw ConfigError("key '" + std::string(spec.name) + "' needs a non-negative integer, got '" + v + "'");
        return std::to_string(std::stoull(v));
      case ValueKind::Text:
        if (v.find_first_of(" \t") != std::string::npos)
          throw ConfigError("key '" + std::string(spec.name) + "' must not contain whitespace");
        return v;
    }
    return v;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace fewcycle::cli
