#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace mfg1d::cli;

void add_overrides(CLI::App* cmd, Overrides& o, std::optional<std::string>& path) {
  cmd->add_option("--grid", o.grid, "working grid size N");
  cmd->add_option("--order", o.order, "truncation order n");
  cmd->add_option("--path", path, "solver path")
      ->check(CLI::IsMember({"auto", "general", "symmetric", "m-fallback"}));
  cmd->add_option("--max-iters", o.max_iters, "solver iteration limit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary one-dimensional mean-field games with congestion"};
  app.require_subcommand(1);

  Overrides overrides;
  std::optional<std::string> path;
  std::string config;
  std::string out_dir = ".";
  std::string table;
  std::string tag;
  std::optional<double> tol;
  bool no_plot = false;

  auto* solve = app.add_subcommand("solve", "solve the problem described by a config file");
  solve->add_option("config", config, "problem config (JSON)")->required();
  solve->add_option("-o,--output", out_dir, "output directory");
  solve->add_option("--tol", overrides.tol, "solver residual tolerance");
  add_overrides(solve, overrides, path);

  auto* validate = app.add_subcommand("validate", "recompute the error function of a sample table");
  validate->add_option("table", table, "samples.csv from solve")->required();
  validate->add_option("config", config, "problem config (JSON)")->required();
  validate->add_option("--tol", tol, "acceptance threshold on sup er");
  validate->add_option("--grid", overrides.grid, "working grid size N");

  auto* zero = app.add_subcommand("zero-current", "solve the zero-current problem");
  zero->add_option("config", config, "problem config with current 0")->required();
  zero->add_option("-o,--output", out_dir, "output directory");
  zero->add_option("--order", overrides.order, "truncation order n");
  zero->add_option("--grid", overrides.grid, "working grid size N");

  auto* reproduce = app.add_subcommand("reproduce", "run a bundled fixture");
  reproduce->add_option("tag", tag, "g1, g2 or g3")->required();
  reproduce->add_option("-o,--output", out_dir, "output directory");
  reproduce->add_option("--tol", overrides.tol, "solver residual tolerance");
  reproduce->add_flag("--no-plot", no_plot, "skip the gnuplot script");
  add_overrides(reproduce, overrides, path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  if (path) overrides.path = mfg1d::parse_solver_path(*path);

  const Streams io{std::cout, std::cerr};
  if (*solve) return cmd_solve(config, out_dir, overrides, io);
  if (*validate) return cmd_validate(table, config, tol, overrides, io);
  if (*zero) return cmd_zero_current(config, out_dir, overrides, io);
  return cmd_reproduce(tag, out_dir, overrides, !no_plot, io);
}
