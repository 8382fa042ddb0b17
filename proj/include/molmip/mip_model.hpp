#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace molmip {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Binary };
enum class Sense { LessEqual, Equal, GreaterEqual };
enum class ObjSense { Minimize, Maximize };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarType type = VarType::Continuous;
  /// Fractional variables of higher priority are branched on first.
  int branch_priority = 0;
};

struct Term {
  int var = -1;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

struct Objective {
  ObjSense sense = ObjSense::Minimize;
  std::vector<Term> terms;
  double constant = 0.0;
};

/// Linear expression builder; the constant is moved to the right-hand side
/// when the expression becomes a constraint.
class LinearExpr {
 public:
  LinearExpr& add(int var, double coef);
  LinearExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }
  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

class MipModel {
 public:
  explicit MipModel(std::string name = "molmip") : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  /// Throws InvariantError on duplicate names, inverted bounds or binary
  /// bounds outside [0,1].
  int add_variable(std::string name, double lower, double upper, VarType type = VarType::Continuous);
  int add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, VarType::Binary); }

  /// Merges repeated variables and drops zero coefficients. Throws on
  /// references to undeclared variables.
  int add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);
  /// Adds `expr sense rhs`, moving the expression constant to the right.
  int add_constraint(std::string name, const LinearExpr& expr, Sense sense, double rhs);

  void set_bounds(int var, double lower, double upper);
  /// Replaces the terms and right-hand side of row `index`, keeping its name and sense.
  void set_row(int index, std::vector<Term> terms, double rhs);
  void set_branch_priority(int var, int priority) { variables_.at(static_cast<std::size_t>(var)).branch_priority = priority; }
  void set_objective(ObjSense sense, std::vector<Term> terms, double constant = 0.0);

  std::optional<int> find_variable(const std::string& name) const;
  /// Throws InvariantError when absent.
  int variable_index(const std::string& name) const;

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Objective& objective() const { return objective_; }
  const Variable& variable(int i) const { return variables_[static_cast<std::size_t>(i)]; }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_binaries() const;

  double objective_value(std::span<const double> x) const;
  static double activity(const Constraint& c, std::span<const double> x);

  void validate() const;

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  Objective objective_;
  std::unordered_map<std::string, int> index_;
};

/// Independent feasibility check of a point: names of every bound, row and
/// integrality violation beyond the tolerances.
std::vector<std::string> find_violations(const MipModel& model, std::span<const double> x, double feas_tol = 1e-6,
                                         double int_tol = 1e-6);

/// Copy with the given variables fixed to the given values.
MipModel with_fixed(const MipModel& model, const std::vector<std::pair<int, double>>& fixings);

}  // namespace molmip
