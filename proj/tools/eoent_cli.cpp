// Command-line front end. Talks to the library only through eoent.h.
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eoent/eoent.h"

namespace {

int exit_code(eoe_status s) {
  switch (s) {
    case EOE_OK: return 0;
    case EOE_PARSE: return 2;
    case EOE_VALIDATION:
    case EOE_INVALID_ARGUMENT: return 3;
    default: return 4;
  }
}

int report(eoe_status s) {
  const char* field = eoe_last_error_field();
  if (field && *field)
    std::fprintf(stderr, "eoent: %s (%s): %s\n", eoe_status_name(s), field, eoe_last_error());
  else
    std::fprintf(stderr, "eoent: %s: %s\n", eoe_status_name(s), eoe_last_error());
  return exit_code(s);
}

struct Options {
  std::string config;
  std::string format;
  std::string output = "-";
  int parallel = 0;
  std::optional<double> cooperativity;
  std::string figure;
};

int run(const Options& opt, const std::string& command) {
  eoe_config* cfg = nullptr;
  eoe_status s = opt.config.empty() ? eoe_config_default(&cfg) : eoe_config_load(opt.config.c_str(), &cfg);
  if (s != EOE_OK) return report(s);

  if (opt.cooperativity) s = eoe_config_set_cooperativity(cfg, *opt.cooperativity);
  if (s == EOE_OK) s = eoe_config_set_threads(cfg, opt.parallel);

  eoe_dataset* ds = nullptr;
  if (s == EOE_OK)
    s = eoe_run(cfg, command.c_str(), command == "figure" ? opt.figure.c_str() : nullptr, &ds);

  if (s == EOE_OK) {
    eoe_format fmt = eoe_config_format(cfg);
    if (opt.format == "csv") fmt = EOE_FORMAT_CSV;
    if (opt.format == "json") fmt = EOE_FORMAT_JSON;
    s = eoe_dataset_write(ds, fmt, opt.output.c_str());
  }

  const int code = s == EOE_OK ? 0 : report(s);
  eoe_dataset_destroy(ds);
  eoe_config_destroy(cfg);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electro-optic entanglement source model"};
  app.set_version_flag("--version", std::string(eoe_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--format", opt.format, "Output format (overrides the config)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", opt.output, "Output file, '-' for stdout");
  app.add_option("--parallel", opt.parallel, "Worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--cooperativity", opt.cooperativity, "Set the pump power so that C equals this");

  app.add_subcommand("rates", "Derived loss rates, coupling and cooperativity");
  app.add_subcommand("spectrum", "Output photon flux densities of both ports");
  app.add_subcommand("entanglement", "Squeezing, E_N, E_F and ebit rate at one operating point");
  app.add_subcommand("fidelity", "Teleportation and conversion fidelities");
  app.add_subcommand("sweep", "Evaluate the configured quantities over the configured sweep");
  auto* fig = app.add_subcommand("figure", "Dataset for one figure preset");
  size_t n_fig = 0;
  const char* const* figs = eoe_figure_names(&n_fig);
  std::vector<std::string> presets(figs, figs + n_fig);
  fig->add_option("name", opt.figure, "Preset name")->required()->check(CLI::IsMember(presets));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  return run(opt, app.get_subcommands().front()->get_name());
}
