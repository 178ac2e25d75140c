#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ojj/cli/scenario.hpp"

int main(int argc, char** argv) {
  using namespace ojj::cli;

  CLI::App app{"Optical Josephson junction simulator"};
  app.require_subcommand(1);

  struct Sub {
    ScenarioKind kind;
    const char* help;
  };
  const Sub subs[] = {
      {ScenarioKind::kProtocol, "number spread after a coupling pulse on a twin Fock state"},
      {ScenarioKind::kInterference, "Bragg readout intensity, collapse and revival"},
      {ScenarioKind::kRing, "trap + ring model against the effective coupling"},
      {ScenarioKind::kBragg, "Bragg ladder transfer scan"},
      {ScenarioKind::kSweep, "vary one scalar parameter of another scenario"},
      {ScenarioKind::kSelftest, "run the invariant suite"},
  };

  std::string config, out;
  bool emit_plots = false;
  std::optional<ScenarioKind> chosen;
  for (const auto& sub : subs) {
    auto* cmd = app.add_subcommand(to_string(sub.kind), sub.help);
    auto* opt = cmd->add_option("--config", config, "scenario JSON file");
    if (sub.kind != ScenarioKind::kSelftest) opt->required();
    cmd->add_option("--out", out, "output directory (overrides output_dir)");
    cmd->add_flag("--emit-plots", emit_plots, "write SVG line plots");
    cmd->callback([&chosen, kind = sub.kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunOptions options;
  if (!config.empty()) options.config_path = config;
  if (!out.empty()) options.out_dir = out;
  options.emit_plots = emit_plots;
  return run_scenario(*chosen, options, std::cout, std::cerr);
}
