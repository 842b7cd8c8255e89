// Command-line front end: simulate, sweep, lambda, contour.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fewcycle/cli/commands.hpp"
#include "fewcycle/cli/config.hpp"

namespace {

struct Invocation {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

CLI::App* add_command(CLI::App& app, const char* name, const char* help, Invocation& inv) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", inv.config_path, "flat 'key = value' configuration file");
  for (const auto& key : fewcycle::cli::config_keys()) {
    const std::string flag = std::string("--") + key.name;
    sub->add_option_function<std::string>(
        flag, [&inv, name = std::string(key.name)](const std::string& v) { inv.overrides[name] = v; },
        key.help);
  }
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fewcycle::cli;
  CLI::App app{"Two-level atom driven by a few-cycle pulse: exact and closed-form coherence dynamics"};
  app.require_subcommand(1);
  Invocation inv;
  add_command(app, "simulate", "time series of the exact solution and approximations", inv);
  add_command(app, "sweep", "relative L2 error surface over (omega0/omega, omega_c/omega)", inv);
  add_command(app, "lambda", "solve for the optimal frequency shift", inv);
  add_command(app, "contour", "level-set polylines of an error surface", inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  RunConfig cfg;
  try {
    if (!inv.config_path.empty()) cfg.load_file(inv.config_path);
    for (const auto& [key, value] : inv.overrides) cfg.set(key, value);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return run_command(app.get_subcommands().front()->get_name(), cfg, std::cerr);
}
