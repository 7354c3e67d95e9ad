#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace mfg1d::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kSolverFailure = 2,
  kNoSolution = 3,
  kNonUnique = 4,
  kNotPositive = 5,
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Writes summary.json and samples.csv (x,m,u,er) to out_dir. A config with
/// current 0 runs the zero-current branch.
int cmd_solve(const std::string& config_path, const std::string& out_dir,
              const Overrides& overrides, Streams io);

/// Recomputes Er from the m column of a samples table. H is read from the
/// summary.json next to the table when present.
int cmd_validate(const std::string& table_path, const std::string& config_path,
                 std::optional<double> tol, const Overrides& overrides, Streams io);

int cmd_zero_current(const std::string& config_path, const std::string& out_dir,
                     const Overrides& overrides, Streams io);

/// Bundled fixtures g1, g2 and g3. Writes config.json and the figure tables
/// kernel_potential.csv, solution.csv and error.csv besides the solve outputs.
int cmd_reproduce(const std::string& tag, const std::string& out_dir, const Overrides& overrides,
                  bool plot_script, Streams io);

/// Bundled fixture config for a reproduce tag, or nullopt.
std::optional<ProblemConfig> reproduce_fixture(const std::string& tag);

}  // namespace mfg1d::cli
