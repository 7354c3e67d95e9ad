#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace mfg1d::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& keys) {
  for (const auto& item : obj.items()) {
    if (!keys.count(item.key())) {
      throw ConfigError(where.empty() ? item.key() : where + "." + item.key(), "unknown field");
    }
  }
}

const json& require_object(const json& doc, const std::string& field) {
  if (!doc.is_object()) throw ConfigError(field, "expected an object");
  return doc;
}

double number(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError(field, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

std::size_t positive_integer(const json& value, const std::string& field) {
  if (!value.is_number_integer() || value.get<long long>() < 1) {
    throw ConfigError(field, "expected a positive integer");
  }
  return value.get<std::size_t>();
}

std::vector<double> number_list(const json& value, const std::string& field) {
  if (!value.is_array()) throw ConfigError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(number(value[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

FunctionSpec parse_function(const json& doc, const std::string& field) {
  require_object(doc, field);
  reject_unknown(doc, field, {"trig", "expression", "table"});
  if (doc.size() != 1) {
    throw ConfigError(field, "expected exactly one of \"trig\", \"expression\" or \"table\"");
  }
  if (doc.contains("trig")) {
    const std::string where = field + ".trig";
    const json& trig = require_object(doc["trig"], where);
    reject_unknown(trig, where, {"cos", "sin"});
    if (!trig.contains("cos")) throw ConfigError(where + ".cos", "missing");
    std::vector<double> c = number_list(trig["cos"], where + ".cos");
    if (c.empty()) throw ConfigError(where + ".cos", "needs at least the constant term");
    std::vector<double> s(c.size() - 1, 0.0);
    if (trig.contains("sin")) {
      s = number_list(trig["sin"], where + ".sin");
      if (s.size() != c.size() - 1) {
        throw ConfigError(where + ".sin", "expected " + std::to_string(c.size() - 1) +
                                              " entries to match cos");
      }
    }
    return FunctionSpec::trig(TrigPoly(std::move(c), std::move(s)));
  }
  if (doc.contains("expression")) {
    const std::string where = field + ".expression";
    if (!doc["expression"].is_string()) throw ConfigError(where, "expected a string");
    try {
      return FunctionSpec::expression(doc["expression"].get<std::string>());
    } catch (const ExpressionError& e) {
      throw ConfigError(where, e.what());
    }
  }
  const std::string where = field + ".table";
  const json& table = require_object(doc["table"], where);
  reject_unknown(table, where, {"values"});
  if (!table.contains("values")) throw ConfigError(where + ".values", "missing");
  std::vector<double> values = number_list(table["values"], where + ".values");
  if (values.size() < 3) throw ConfigError(where + ".values", "needs at least 3 samples");
  return FunctionSpec::table(std::move(values));
}

void parse_solver(const json& doc, SolverConfig& solver) {
  require_object(doc, "solver");
  reject_unknown(doc, "solver", {"tol", "max_iters", "tol_omega", "path"});
  if (doc.contains("tol")) solver.tol_residual = number(doc["tol"], "solver.tol");
  if (doc.contains("tol_omega")) solver.tol_omega = number(doc["tol_omega"], "solver.tol_omega");
  if (doc.contains("max_iters")) {
    solver.max_iters = static_cast<int>(positive_integer(doc["max_iters"], "solver.max_iters"));
  }
  if (doc.contains("path")) {
    const auto path = doc["path"].is_string() ? parse_solver_path(doc["path"].get<std::string>())
                                              : std::nullopt;
    if (!path) throw ConfigError("solver.path", "expected auto, general, symmetric or m-fallback");
    solver.path = *path;
  }
  if (!(solver.tol_residual > 0.0)) throw ConfigError("solver.tol", "must be positive");
  if (!(solver.tol_omega > 0.0)) throw ConfigError("solver.tol_omega", "must be positive");
}

void parse_schedule(const json& doc, ApproxSchedule& schedule) {
  require_object(doc, "schedule");
  reject_unknown(doc, "schedule", {"orders", "stop_tol", "approximation"});
  if (doc.contains("orders")) {
    const json& orders = doc["orders"];
    if (!orders.is_array() || orders.empty()) {
      throw ConfigError("schedule.orders", "expected a nonempty array of orders");
    }
    schedule.orders.clear();
    for (std::size_t i = 0; i < orders.size(); ++i) {
      schedule.orders.push_back(
          positive_integer(orders[i], "schedule.orders[" + std::to_string(i) + "]"));
      if (i > 0 && schedule.orders[i] <= schedule.orders[i - 1]) {
        throw ConfigError("schedule.orders", "must be strictly increasing");
      }
    }
  }
  if (doc.contains("stop_tol")) {
    schedule.stop_tol = number(doc["stop_tol"], "schedule.stop_tol");
    if (!(schedule.stop_tol > 0.0)) throw ConfigError("schedule.stop_tol", "must be positive");
  }
  if (doc.contains("approximation")) {
    const auto method = doc["approximation"].is_string()
                            ? parse_kernel_approximation(doc["approximation"].get<std::string>())
                            : std::nullopt;
    if (!method) throw ConfigError("schedule.approximation", "expected fejer or truncated");
    schedule.method = *method;
  }
}

nlohmann::ordered_json list(std::span<const double> values) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (double v : values) out.push_back(v);
  return out;
}

}  // namespace

FunctionSpec FunctionSpec::trig(TrigPoly p) {
  FunctionSpec f;
  f.form_ = Form::Trig;
  f.poly_ = std::move(p);
  return f;
}

FunctionSpec FunctionSpec::expression(const std::string& text) {
  FunctionSpec f;
  f.form_ = Form::Expression;
  f.expr_ = Expression::parse(text);
  return f;
}

FunctionSpec FunctionSpec::table(std::vector<double> values) {
  FunctionSpec f;
  f.form_ = Form::Table;
  const PeriodicGrid grid(values.size());
  f.poly_ = interpolate(SampledFunction(grid, values));
  f.table_ = std::move(values);
  return f;
}

RealFunction FunctionSpec::function() const {
  if (form_ == Form::Expression) return *expr_;
  return poly_;
}

nlohmann::ordered_json FunctionSpec::to_json() const {
  nlohmann::ordered_json out;
  switch (form_) {
    case Form::Trig:
      out["trig"]["cos"] = list(poly_.cos_coeffs());
      out["trig"]["sin"] = list(poly_.sin_coeffs());
      break;
    case Form::Expression:
      out["expression"] = expr_->text();
      break;
    case Form::Table:
      out["table"]["values"] = list(table_);
      break;
  }
  return out;
}

nlohmann::ordered_json ProblemConfig::to_json() const {
  nlohmann::ordered_json out;
  out["alpha"] = alpha;
  out["current"] = current;
  out["kernel"] = kernel.to_json();
  out["potential"] = potential.to_json();
  if (order) out["order"] = *order;
  out["grid"] = grid;
  out["solver"] = {{"tol", solver.tol_residual},
                   {"max_iters", solver.max_iters},
                   {"tol_omega", solver.tol_omega},
                   {"path", to_string(solver.path)}};
  out["schedule"] = {{"orders", schedule.orders},
                     {"stop_tol", schedule.stop_tol},
                     {"approximation", to_string(schedule.method)}};
  out["validate_tol"] = validate_tol;
  return out;
}

ProblemConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("(root)", "expected a JSON object");
  reject_unknown(doc, "", {"alpha", "current", "kernel", "potential", "order", "grid", "solver",
                           "schedule", "validate_tol"});
  ProblemConfig config;
  for (const char* key : {"alpha", "current", "kernel", "potential"}) {
    if (!doc.contains(key)) throw ConfigError(key, "missing");
  }
  config.alpha = number(doc["alpha"], "alpha");
  if (!(config.alpha > 0.0 && config.alpha <= 2.0)) {
    throw ConfigError("alpha", "must lie in the admissible range (0, 2]");
  }
  config.current = number(doc["current"], "current");
  config.kernel = parse_function(doc["kernel"], "kernel");
  config.potential = parse_function(doc["potential"], "potential");
  if (doc.contains("order")) {
    const json& order = doc["order"];
    if (!order.is_number_integer() || order.get<long long>() < 0) {
      throw ConfigError("order", "expected a nonnegative integer");
    }
    config.order = order.get<std::size_t>();
  }
  if (doc.contains("grid")) config.grid = positive_integer(doc["grid"], "grid");
  if (doc.contains("solver")) parse_solver(doc["solver"], config.solver);
  if (doc.contains("schedule")) parse_schedule(doc["schedule"], config.schedule);
  if (doc.contains("validate_tol")) {
    config.validate_tol = number(doc["validate_tol"], "validate_tol");
    if (!(config.validate_tol > 0.0)) throw ConfigError("validate_tol", "must be positive");
  }
  return config;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

void apply_overrides(ProblemConfig& config, const Overrides& overrides) {
  if (overrides.grid) {
    if (*overrides.grid < 2) throw ConfigError("--grid", "must be at least 2");
    config.grid = *overrides.grid;
  }
  if (overrides.order) config.order = *overrides.order;
  if (overrides.path) config.solver.path = *overrides.path;
  if (overrides.max_iters) {
    if (*overrides.max_iters < 1) throw ConfigError("--max-iters", "must be at least 1");
    config.solver.max_iters = *overrides.max_iters;
  }
  if (overrides.tol) {
    if (!(*overrides.tol > 0.0)) throw ConfigError("--tol", "must be positive");
    config.solver.tol_residual = *overrides.tol;
  }
}

}  // namespace mfg1d::cli
