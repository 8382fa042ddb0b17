#include "molmip/mip_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "molmip/error.hpp"

namespace molmip {

LinearExpr& LinearExpr::add(int var, double coef) {
  if (coef != 0.0) terms_.push_back({var, coef});
  return *this;
}

int MipModel::add_variable(std::string name, double lower, double upper, VarType type) {
  if (index_.count(name)) throw InvariantError("duplicate variable name " + name);
  if (std::isnan(lower) || std::isnan(upper) || lower > upper)
    throw InvariantError(fmt::format("variable {}: invalid bounds [{}, {}]", name, lower, upper));
  if (type == VarType::Binary && (lower < 0.0 || upper > 1.0))
    throw InvariantError(fmt::format("binary variable {}: bounds must lie in [0,1]", name));
  const int id = num_variables();
  index_.emplace(name, id);
  variables_.push_back({std::move(name), lower, upper, type});
  return id;
}

int MipModel::add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_variables())
      throw InvariantError(fmt::format("constraint {}: unknown variable {}", name, t.var));
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) { return m.var == t.var; });
    if (it == merged.end())
      merged.push_back(t);
    else
      it->coef += t.coef;
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  if (!std::isfinite(rhs)) throw InvariantError(fmt::format("constraint {}: non-finite right-hand side", name));
  constraints_.push_back({std::move(name), std::move(merged), sense, rhs});
  return num_constraints() - 1;
}

int MipModel::add_constraint(std::string name, const LinearExpr& expr, Sense sense, double rhs) {
  return add_constraint(std::move(name), expr.terms(), sense, rhs - expr.constant());
}

void MipModel::set_bounds(int var, double lower, double upper) {
  auto& v = variables_.at(static_cast<std::size_t>(var));
  if (lower > upper) throw InvariantError(fmt::format("variable {}: invalid bounds [{}, {}]", v.name, lower, upper));
  if (v.type == VarType::Binary && (lower < 0.0 || upper > 1.0))
    throw InvariantError(fmt::format("binary variable {}: bounds must lie in [0,1]", v.name));
  v.lower = lower;
  v.upper = upper;
}

void MipModel::set_row(int index, std::vector<Term> terms, double rhs) {
  Constraint& c = constraints_.at(static_cast<std::size_t>(index));
  Constraint updated = c;
  std::string name = c.name;
  const Sense sense = c.sense;
  add_constraint(std::move(name), std::move(terms), sense, rhs);
  updated = std::move(constraints_.back());
  constraints_.pop_back();
  constraints_[static_cast<std::size_t>(index)] = std::move(updated);
}

void MipModel::set_objective(ObjSense sense, std::vector<Term> terms, double constant) {
  objective_.sense = sense;
  objective_.terms.clear();
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) throw InvariantError("objective: unknown variable");
    auto it = std::find_if(objective_.terms.begin(), objective_.terms.end(),
                           [&](const Term& m) { return m.var == t.var; });
    if (it == objective_.terms.end())
      objective_.terms.push_back(t);
    else
      it->coef += t.coef;
  }
  std::erase_if(objective_.terms, [](const Term& t) { return t.coef == 0.0; });
  objective_.constant = constant;
}

std::optional<int> MipModel::find_variable(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int MipModel::variable_index(const std::string& name) const {
  auto id = find_variable(name);
  if (!id) throw InvariantError("no variable named " + name);
  return *id;
}

int MipModel::num_binaries() const {
  return static_cast<int>(
      std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) { return v.type == VarType::Binary; }));
}

double MipModel::objective_value(std::span<const double> x) const {
  double value = objective_.constant;
  for (const Term& t : objective_.terms) value += t.coef * x[static_cast<std::size_t>(t.var)];
  return value;
}

double MipModel::activity(const Constraint& c, std::span<const double> x) {
  double a = 0.0;
  for (const Term& t : c.terms) a += t.coef * x[static_cast<std::size_t>(t.var)];
  return a;
}

void MipModel::validate() const {
  for (const auto& v : variables_)
    if (v.lower > v.upper || (v.type == VarType::Binary && (v.lower < 0.0 || v.upper > 1.0)))
      throw InvariantError("variable " + v.name + " has invalid bounds");
  for (const auto& c : constraints_)
    for (const Term& t : c.terms)
      if (t.var < 0 || t.var >= num_variables()) throw InvariantError("constraint " + c.name + " references unknown variable");
}

std::vector<std::string> find_violations(const MipModel& model, std::span<const double> x, double feas_tol,
                                         double int_tol) {
  std::vector<std::string> out;
  if (x.size() != static_cast<std::size_t>(model.num_variables())) {
    out.push_back("point has wrong dimension");
    return out;
  }
  for (int j = 0; j < model.num_variables(); ++j) {
    const auto& v = model.variable(j);
    const double xj = x[static_cast<std::size_t>(j)];
    if (xj < v.lower - feas_tol || xj > v.upper + feas_tol)
      out.push_back(fmt::format("bound {}: {} not in [{}, {}]", v.name, xj, v.lower, v.upper));
    if (v.type == VarType::Binary && std::abs(xj - std::round(xj)) > int_tol)
      out.push_back(fmt::format("integrality {}: {}", v.name, xj));
  }
  for (const auto& c : model.constraints()) {
    const double a = MipModel::activity(c, x);
    // Scale the tolerance with the row magnitude (big coefficients such as
    // powers of two in ordering rows).
    double scale = 1.0;
    for (const Term& t : c.terms) scale = std::max(scale, std::abs(t.coef * x[static_cast<std::size_t>(t.var)]));
    const double tol = feas_tol * scale;
    const bool ok = c.sense == Sense::LessEqual      ? a <= c.rhs + tol
                    : c.sense == Sense::GreaterEqual ? a >= c.rhs - tol
                                                     : std::abs(a - c.rhs) <= tol;
    if (!ok) out.push_back(fmt::format("row {}: activity {} vs rhs {}", c.name, a, c.rhs));
  }
  return out;
}

MipModel with_fixed(const MipModel& model, const std::vector<std::pair<int, double>>& fixings) {
  MipModel copy = model;
  for (const auto& [var, value] : fixings) copy.set_bounds(var, value, value);
  return copy;
}

}  // namespace molmip
