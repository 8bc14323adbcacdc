#pragma once

// CLI subcommands: curve, orbit, series, foliate, caustics, conjugacy.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace billiards {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";  ///< tables as csv or json
  bool svg = false;
  std::uint64_t seed = 1;
  std::string profile = "default";
};

const std::vector<std::string>& command_names();

/// Runs one subcommand, writing artifacts under opt.out_dir and a summary to out.
/// Returns 0 on success, 2 on validation errors, 3 on numerical failures or failed certificates,
/// 4 when a conjugacy verdict is negative.
int run_command(const std::string& name, const GlobalOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace billiards
