#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "expression.hpp"

using namespace mfg1d;
using namespace mfg1d::cli;
namespace fs = std::filesystem;

namespace {

fs::path work_dir(const std::string& name) {
  const fs::path dir = fs::path(MFG1D_TEST_WORK_DIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

struct Captured {
  std::ostringstream out;
  std::ostringstream err;
  Streams io() { return Streams{out, err}; }
};

const char* kFlatConfig = R"j({
  "alpha": 1.5,
  "current": 1.4142135623730951,
  "kernel": {"trig": {"cos": [1, 1], "sin": [0]}},
  "potential": {"trig": {"cos": [0]}}
})j";

const char* kZeroCurrentSolution = R"j({
  "alpha": 1.0, "current": 0,
  "kernel": {"trig": {"cos": [1, 1], "sin": [0]}},
  "potential": {"trig": {"cos": [0, 0.1], "sin": [0]}}
})j";

ProblemConfig parse(const std::string& text) { return parse_config(nlohmann::json::parse(text)); }

std::string config_error_field(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::vector<std::vector<double>> read_table(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Expression, Evaluates) {
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2*3")(0), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-x^2")(3), -9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^-1")(0), 0.5);
  EXPECT_DOUBLE_EQ(Expression::parse("(1 - x)/4")(0.2), 0.2);
  EXPECT_NEAR(Expression::parse("2*sin(2*pi*(x + 1/4))")(0.1), 2 * std::cos(kTwoPi * 0.1), 1e-15);
  EXPECT_NEAR(Expression::parse("sqrt(abs(-4)) + exp(0) + log(1) + tan(0) + cos(0)")(0), 4.0, 1e-15);
  EXPECT_DOUBLE_EQ(Expression::parse("1e-3*x")(2), 2e-3);
}

TEST(Expression, SyntaxErrors) {
  for (const char* bad : {"", "1 +", "sin x", "foo(1)", "(1", "1 2", "y", "3 $ 4"}) {
    EXPECT_THROW(Expression::parse(bad), ExpressionError) << bad;
  }
}

TEST(Config, ParsesAllForms) {
  const ProblemConfig c = parse(R"j({
    "alpha": 2, "current": -1.5, "order": 3, "grid": 256, "validate_tol": 1e-7,
    "kernel": {"table": {"values": [1, 2, 3, 2, 1, 0.5, 0.25, 0.5, 0.75]}},
    "potential": {"expression": "cos(2*pi*x)"},
    "solver": {"tol": 1e-11, "max_iters": 50, "tol_omega": 1e-13, "path": "m-fallback"},
    "schedule": {"orders": [2, 4], "stop_tol": 1e-6, "approximation": "truncated"}
  })j");
  EXPECT_EQ(c.alpha, 2.0);
  EXPECT_EQ(c.current, -1.5);
  EXPECT_EQ(c.order, 3u);
  EXPECT_EQ(c.grid, 256u);
  EXPECT_EQ(c.kernel.form(), FunctionSpec::Form::Table);
  EXPECT_NEAR(c.kernel.function()(2.0 / 9.0), 3.0, 1e-13);
  EXPECT_EQ(c.potential.form(), FunctionSpec::Form::Expression);
  EXPECT_EQ(c.solver.path, SolverPath::MFallback);
  EXPECT_EQ(c.solver.max_iters, 50);
  EXPECT_EQ(c.schedule.orders, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(c.schedule.method, KernelApproximation::Truncated);
  EXPECT_EQ(c.validate_tol, 1e-7);

  // Serialization round trip.
  const ProblemConfig back = parse(c.to_json().dump());
  EXPECT_EQ(back.to_json().dump(), c.to_json().dump());
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(config_error_field(R"j({"current": 1, "kernel": {"trig": {"cos": [1]}}, "potential": {"trig": {"cos": [0]}}})j"), "alpha");
  EXPECT_EQ(config_error_field(R"j({"alpha": 3, "current": 1, "kernel": {"trig": {"cos": [1]}}, "potential": {"trig": {"cos": [0]}}})j"), "alpha");
  EXPECT_EQ(config_error_field(R"j({"alpha": 1, "current": "x", "kernel": {"trig": {"cos": [1]}}, "potential": {"trig": {"cos": [0]}}})j"), "current");
  EXPECT_EQ(config_error_field(R"j({"alpha": 1, "current": 1, "kernel": {"trig": {"cos": [1, 2], "sin": []}}, "potential": {"trig": {"cos": [0]}}})j"), "kernel.trig.sin");
  EXPECT_EQ(config_error_field(R"j({"alpha": 1, "current": 1, "kernel": {"trig": {"cos": [1]}, "expression": "1"}, "potential": {"trig": {"cos": [0]}}})j"), "kernel");
  EXPECT_EQ(config_error_field(R"j({"alpha": 1, "current": 1, "kernel": {"trig": {"cos": [1]}}, "potential": {"expression": "sin("}})j"), "potential.expression");
  EXPECT_EQ(config_error_field(R"j({"alpha": 1, "current": 1, "kernel": {"trig": {"cos": [1]}}, "potential": {"trig": {"cos": [0]}}, "grid": 0})j"), "grid");
  EXPECT_EQ(config_error_field(R"j({"alpha": 1, "current": 1, "kernel": {"trig": {"cos": [1]}}, "potential": {"trig": {"cos": [0]}}, "solver": {"path": "x"}})j"), "solver.path");
  EXPECT_EQ(config_error_field(R"j({"alpha": 1, "current": 1, "kernel": {"trig": {"cos": [1]}}, "potential": {"trig": {"cos": [0]}}, "schedule": {"orders": [4, 2]}})j"), "schedule.orders");
  EXPECT_EQ(config_error_field(R"j({"alpha": 1, "current": 1, "kernel": {"trig": {"cos": [1]}}, "potential": {"trig": {"cos": [0]}}, "colour": 1})j"), "colour");
}

TEST(Config, Overrides) {
  ProblemConfig c = parse(kFlatConfig);
  Overrides o;
  o.grid = 512;
  o.order = 3;
  o.path = SolverPath::General;
  o.max_iters = 7;
  o.tol = 1e-9;
  apply_overrides(c, o);
  EXPECT_EQ(c.grid, 512u);
  EXPECT_EQ(c.order, 3u);
  EXPECT_EQ(c.solver.path, SolverPath::General);
  EXPECT_EQ(c.solver.max_iters, 7);
  EXPECT_EQ(c.solver.tol_residual, 1e-9);
  o = Overrides{};
  o.tol = -1;
  EXPECT_THROW(apply_overrides(c, o), ConfigError);
}

TEST(CmdSolve, FlatFixture) {
  const fs::path dir = work_dir("flat");
  const fs::path config = write_file(dir / "config.json", kFlatConfig);
  Captured cap;
  ASSERT_EQ(cmd_solve(config, dir / "out", {}, cap.io()), kSuccess) << cap.err.str();
  const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  EXPECT_NEAR(summary["a"][0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(summary["hbar"].get<double>(), 0.0, 1e-12);
  EXPECT_LE(summary["residual"].get<double>(), 1e-12);
  const auto rows = read_table(dir / "out" / "samples.csv");
  EXPECT_EQ(rows.size(), 1024u);
  EXPECT_EQ(slurp(dir / "out" / "samples.csv").substr(0, 9), "x,m,u,er\n");
}

TEST(CmdSolve, ConfigErrors) {
  const fs::path dir = work_dir("config_errors");
  Captured cap;
  const fs::path bad_alpha = write_file(dir / "a.json", R"j({"alpha": 3, "current": 1, "kernel": {"trig": {"cos": [1]}}, "potential": {"trig": {"cos": [0]}}})j");
  EXPECT_EQ(cmd_solve(bad_alpha, dir / "out", {}, cap.io()), kConfigError);
  EXPECT_NE(cap.err.str().find("(0, 2]"), std::string::npos);

  Captured cap2;
  const fs::path bad_kernel = write_file(dir / "k.json", R"j({"alpha": 1, "current": 1, "kernel": {"trig": {"cos": [1, -2]}}, "potential": {"trig": {"cos": [0]}}})j");
  EXPECT_EQ(cmd_solve(bad_kernel, dir / "out", {}, cap2.io()), kConfigError);
  EXPECT_NE(cap2.err.str().find("p_1 = -2"), std::string::npos);

  Captured cap3;
  EXPECT_EQ(cmd_solve(dir / "missing.json", dir / "out", {}, cap3.io()), kConfigError);
  Captured cap4;
  const fs::path malformed = write_file(dir / "m.json", "{ not json");
  EXPECT_EQ(cmd_solve(malformed, dir / "out", {}, cap4.io()), kConfigError);
  Captured cap5;
  Overrides coarse;
  coarse.grid = 4;
  EXPECT_EQ(cmd_solve(write_file(dir / "f.json", kFlatConfig), dir / "out", coarse, cap5.io()), kConfigError);
}

TEST(CmdSolve, SolverFailureExit) {
  const fs::path dir = work_dir("solver_failure");
  Captured cap;
  Overrides o;
  o.max_iters = 1;
  ASSERT_EQ(cmd_reproduce("g1", dir, o, false, cap.io()), kSolverFailure);
  const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary["termination"], "max_iters");
}

TEST(CmdSolve, ZeroCurrentDispatch) {
  const fs::path dir = work_dir("dispatch");
  Captured cap;
  EXPECT_EQ(cmd_solve(write_file(dir / "c.json", kZeroCurrentSolution), dir / "out", {}, cap.io()), kSuccess);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "out" / "summary.json"))["branch"], "zero-current");
  Captured cap2;
  EXPECT_EQ(cmd_zero_current(write_file(dir / "f.json", kFlatConfig), dir / "out2", {}, cap2.io()), kConfigError);
}

TEST(CmdZeroCurrent, OutcomeExitCodes) {
  const fs::path dir = work_dir("zero_current");
  Captured cap;
  ASSERT_EQ(cmd_zero_current(write_file(dir / "s.json", kZeroCurrentSolution), dir / "s", {}, cap.io()), kSuccess);
  const auto rows = read_table(dir / "s" / "samples.csv");
  for (const auto& row : rows) EXPECT_NEAR(row[1], 1.0 + 0.2 * std::cos(kTwoPi * row[0]), 1e-14);

  const fs::path none = write_file(dir / "n.json", R"j({"alpha": 1, "current": 0,
    "kernel": {"trig": {"cos": [1, 1, 0], "sin": [0, 0]}},
    "potential": {"trig": {"cos": [0, 0.1, 0.05], "sin": [0, 0]}}})j");
  EXPECT_EQ(cmd_zero_current(none, dir / "n", {}, cap.io()), kNoSolution);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "n" / "summary.json"))["mode"], 2);

  const fs::path many = write_file(dir / "u.json", R"j({"alpha": 1, "current": 0,
    "kernel": {"trig": {"cos": [1, 1, 0], "sin": [0, 0]}},
    "potential": {"trig": {"cos": [0, 0.1, 0], "sin": [0, 0]}}})j");
  EXPECT_EQ(cmd_zero_current(many, dir / "u", {}, cap.io()), kNonUnique);

  const fs::path negative = write_file(dir / "p.json", R"j({"alpha": 1, "current": 0,
    "kernel": {"trig": {"cos": [1, 0.1], "sin": [0]}},
    "potential": {"trig": {"cos": [0, 0.1], "sin": [0]}}})j");
  EXPECT_EQ(cmd_zero_current(negative, dir / "p", {}, cap.io()), kNotPositive);
}

TEST(CmdReproduce, TagsFilesAndDeterminism) {
  for (const std::string tag : {"g1", "g2", "g3"}) {
    const fs::path a = work_dir("repro_a_" + tag);
    const fs::path b = work_dir("repro_b_" + tag);
    Captured cap;
    ASSERT_EQ(cmd_reproduce(tag, a, {}, true, cap.io()), kSuccess) << cap.err.str();
    ASSERT_EQ(cmd_reproduce(tag, b, {}, true, cap.io()), kSuccess);
    for (const char* file : {"samples.csv", "summary.json", "kernel_potential.csv", "solution.csv", "error.csv", "config.json", "plot.gp"}) {
      ASSERT_TRUE(fs::exists(a / file)) << file;
      EXPECT_EQ(slurp(a / file), slurp(b / file)) << tag << " " << file;
    }
    const nlohmann::json summary = nlohmann::json::parse(slurp(a / "summary.json"));
    EXPECT_LE(summary["residual"].get<double>(), 1e-6);
    double sup = 0;
    for (const auto& row : read_table(a / "samples.csv")) sup = std::max(sup, row[3]);
    EXPECT_NEAR(sup, summary["residual"].get<double>(), 1e-12);
    if (tag == "g2") EXPECT_EQ(summary["path"], "symmetric");
    if (tag == "g3") {
      EXPECT_EQ(summary["branch"], "pipeline");
      EXPECT_TRUE(summary.contains("stages"));
    }

    Captured val;
    EXPECT_EQ(cmd_validate(a / "samples.csv", a / "config.json", std::nullopt, {}, val.io()), kSuccess) << val.out.str();
  }
  Captured cap;
  EXPECT_EQ(cmd_reproduce("g9", work_dir("repro_bad"), {}, false, cap.io()), kConfigError);
}

TEST(CmdValidate, ScaledDensityAndHandWrittenTable) {
  const fs::path dir = work_dir("validate");
  Captured cap;
  const fs::path config = write_file(dir / "config.json", kFlatConfig);
  ASSERT_EQ(cmd_solve(config, dir / "solved", {}, cap.io()), kSuccess);
  EXPECT_EQ(cmd_validate(dir / "solved" / "samples.csv", config, std::nullopt, {}, cap.io()), kSuccess);

  // Scale m by 1.01 in a copy next to the original summary.
  const fs::path scaled_dir = dir / "scaled";
  fs::create_directories(scaled_dir);
  fs::copy_file(dir / "solved" / "summary.json", scaled_dir / "summary.json");
  {
    std::ofstream out(scaled_dir / "samples.csv");
    out << "x,m,u,er\n";
    for (const auto& row : read_table(dir / "solved" / "samples.csv")) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,0,0\n", row[0], 1.01 * row[1]);
      out << buf;
    }
  }
  Captured scaled;
  EXPECT_EQ(cmd_validate(scaled_dir / "samples.csv", config, std::nullopt, {}, scaled.io()), kSolverFailure);
  EXPECT_NE(scaled.out.str().find("sup_er"), std::string::npos);

  // Hand-written flat table without a summary: H is estimated.
  const fs::path hand_dir = dir / "hand";
  fs::create_directories(hand_dir);
  {
    std::ofstream out(hand_dir / "table.csv");
    out << "x,m\n";
    for (int i = 0; i < 1024; ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g,1\n", i / 1024.0);
      out << buf;
    }
  }
  Captured hand;
  EXPECT_EQ(cmd_validate(hand_dir / "table.csv", config, 1e-12, {}, hand.io()), kSuccess) << hand.out.str();

  Captured mismatch;
  Overrides o;
  o.grid = 512;
  EXPECT_EQ(cmd_validate(hand_dir / "table.csv", config, std::nullopt, o, mismatch.io()), kConfigError);
  EXPECT_NE(mismatch.err.str().find("mismatch"), std::string::npos);
}

TEST(Binary, ExitCodes) {
  const fs::path dir = work_dir("binary");
  const std::string exe = MFG1D_EXE;
  auto run = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  const fs::path config = write_file(dir / "flat.json", kFlatConfig);
  EXPECT_EQ(run("solve " + config.string() + " -o " + (dir / "out").string()), 0);
  EXPECT_EQ(run("validate " + (dir / "out" / "samples.csv").string() + " " + config.string() + " --tol 1e-12"), 0);
  EXPECT_EQ(run("solve " + config.string() + " -o " + (dir / "out").string() + " --path bogus"), 1);
  EXPECT_EQ(run("reproduce g9 -o " + (dir / "x").string()), 1);
  EXPECT_EQ(run("reproduce g2 --no-plot --path general -o " + (dir / "g2").string()), 0);
  EXPECT_FALSE(fs::exists(dir / "g2" / "plot.gp"));
  EXPECT_EQ(run(""), 1);
}
