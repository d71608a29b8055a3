#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "wavekin/cli/commands.hpp"
#include "wavekin/cli/config.hpp"
#include "wavekin/error.hpp"

using namespace wavekin::cli;

namespace {

struct Overrides {
  std::string preset;
  std::string config;
  std::map<std::string, std::string> values;
  bool strict = false;
  bool outflow = false;
  bool no_outflow = false;

  void attach(CLI::App& app) {
    app.add_option("--preset", preset, "start from a named preset (see `wavekin presets`)");
    app.add_option("--config", config, "key = value configuration file");
    const std::pair<const char*, const char*> fields[] = {
        {"--scheme", "scheme"},        {"--theta", "theta"},   {"--gamma", "gamma"},
        {"--delta", "delta"},          {"--R", "R"},           {"--cells", "cells"},
        {"--grid", "grid"},            {"--xi-min", "xi_min"}, {"--xi-max", "xi_max"},
        {"--dt", "dt"},                {"--tmax", "tmax"},     {"--ic", "ic"},
        {"--snapshot-every", "snapshot_every"}, {"--out", "out"}, {"--projection", "projection"},
        {"--levels", "levels"},        {"--name", "name"},
    };
    for (const auto& [flag, key] : fields) {
      app.add_option(flag, values[key], std::string("set ") + key);
    }
    app.add_flag("--strict-negativity", strict, "abort when a density drops below -1e-12 max N");
    app.add_flag("--outflow", outflow, "keep overflowing pairs in the K1 loss term");
    app.add_flag("--no-outflow", no_outflow, "truncate the K1 loss term at R");
  }

  SimulationConfig build() const {
    SimulationConfig c;
    if (!preset.empty()) c = find_preset(preset).config;
    if (!config.empty()) c = load_config(config, c);
    for (const auto& [key, value] : values) {
      if (!value.empty()) set_field(c, key, value);
    }
    if (strict) c.strict_negativity = true;
    if (outflow) c.outflow = true;
    if (no_outflow) c.outflow = false;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite volume solver for the truncated 3-wave kinetic equation"};
  app.require_subcommand(1);

  Overrides run_args;
  auto* run = app.add_subcommand("run", "integrate one configuration and write CSV output");
  run_args.attach(*run);

  Overrides eoc_args;
  unsigned workers = 1;
  auto* eoc = app.add_subcommand("eoc", "grid convergence study on successively doubled grids");
  eoc_args.attach(*eoc);
  eoc->add_option("--workers", workers, "concurrent grid levels")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("presets", "list the built-in presets");
  bool dump = false;
  std::string show;
  list->add_option("--show", show, "print one preset as a configuration file");
  list->add_flag("--dump", dump, "print every preset as a configuration file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(run_args.build(), std::cout, std::cerr);
    if (*eoc) return eoc_command(eoc_args.build(), workers, std::cout, std::cerr);
    if (!show.empty()) {
      std::cout << write_config(find_preset(show).config);
      return 0;
    }
    if (dump) {
      for (const auto& p : presets()) std::cout << "# " << p.description << '\n' << write_config(p.config) << '\n';
      return 0;
    }
    return presets_command(std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
