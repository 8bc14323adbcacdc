#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "billiards/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Near-boundary dynamics of convex billiards"};
  app.require_subcommand(1, 1);
  billiards::GlobalOptions opt;
  app.add_option("--config", opt.config_path, "Key-value config file")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_dir, "Output directory");
  app.add_option("--format", opt.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--svg", opt.svg, "Write layered SVG plots");
  app.add_option("--seed", opt.seed, "Seed for sampled probes");
  app.add_option("--tolerance-profile", opt.profile, "Tolerance table")->check(CLI::IsMember({"strict", "default"}));
  static const std::map<std::string, std::string> about = {
      {"curve", "Sample the boundary and its curvature"},
      {"orbit", "Iterate the billiard map from [orbit]"},
      {"series", "Build the invariant series and scan its defect"},
      {"foliate", "Build perturbed foliations and compare their caustics"},
      {"caustics", "Construct caustics from level sets of the series"},
      {"conjugacy", "Compare Lazutkin lengths and build the boundary map"}};
  for (const auto& name : billiards::command_names()) {
    auto it = about.find(name);
    app.add_subcommand(name, it == about.end() ? "" : it->second);
  }
  app.fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  std::string cmd = app.get_subcommands().front()->get_name();
  return billiards::run_command(cmd, opt, std::cout, std::cerr);
}
