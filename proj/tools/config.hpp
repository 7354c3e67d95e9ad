#pragma once

// Problem description files. A config is one JSON document:
//
//   {
//     "alpha": 1.5,
//     "current": 1.4142135623730951,
//     "kernel":    {"trig": {"cos": [1, 4, 1], "sin": [-5, -2]}},
//     "potential": {"expression": "2*sin(2*pi*(x + 1/4))"},
//     "order": 2,                      optional
//     "grid": 1024,                    optional
//     "solver":   {"tol": 1e-10, "max_iters": 200, "tol_omega": 1e-12, "path": "auto"},
//     "schedule": {"orders": [4, 8, 16, 32, 64], "stop_tol": 1e-8, "approximation": "fejer"},
//     "validate_tol": 1e-6
//   }
//
// Kernel and potential take exactly one of three forms: "trig" coefficient
// lists, an "expression" in x, or a "table" {"values": [...]} of samples at
// x_i = i/len(values), which is interpolated by a trigonometric polynomial.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "expression.hpp"
#include "mfg1d/fourier.hpp"
#include "mfg1d/pipeline.hpp"
#include "mfg1d/solver.hpp"

namespace mfg1d::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A periodic function given in one of the three config forms.
class FunctionSpec {
 public:
  enum class Form { Trig, Expression, Table };

  static FunctionSpec trig(TrigPoly p);
  static FunctionSpec expression(const std::string& text);
  static FunctionSpec table(std::vector<double> values);

  Form form() const { return form_; }
  bool is_trig() const { return form_ == Form::Trig; }
  /// The polynomial of a Trig form, or the interpolant of a Table form.
  const TrigPoly& poly() const { return poly_; }
  RealFunction function() const;
  nlohmann::ordered_json to_json() const;

 private:
  Form form_ = Form::Trig;
  TrigPoly poly_;
  std::optional<Expression> expr_;
  std::vector<double> table_;
};

struct ProblemConfig {
  double alpha = 1.0;
  double current = 1.0;
  FunctionSpec kernel = FunctionSpec::trig(TrigPoly::constant(1.0));
  FunctionSpec potential = FunctionSpec::trig(TrigPoly::constant(0.0));
  std::optional<std::size_t> order;
  std::size_t grid = kDefaultGridSize;
  SolverConfig solver;
  ApproxSchedule schedule;
  double validate_tol = 1e-6;

  nlohmann::ordered_json to_json() const;
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::size_t> grid;
  std::optional<std::size_t> order;
  std::optional<SolverPath> path;
  std::optional<int> max_iters;
  std::optional<double> tol;
};

/// Throws ConfigError naming the offending field.
ProblemConfig parse_config(const nlohmann::json& doc);
ProblemConfig load_config(const std::string& path);

/// Throws ConfigError if an override is out of range.
void apply_overrides(ProblemConfig& config, const Overrides& overrides);

}  // namespace mfg1d::cli
