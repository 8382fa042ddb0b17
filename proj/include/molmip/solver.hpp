#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "molmip/lp.hpp"
#include "molmip/mip_model.hpp"

namespace molmip {

enum class NodeSelection { BestBound, DepthFirst };
enum class Branching { MostFractional };
enum class Emphasis { Optimality, Feasibility };

std::string to_string(Emphasis e);
Emphasis emphasis_from_string(const std::string& s);

struct SolveConfig {
  double rel_gap = 1e-4;
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  double feasibility_tol = 1e-6;
  double integrality_tol = 1e-6;
  NodeSelection node_selection = NodeSelection::BestBound;
  Branching branching = Branching::MostFractional;
  /// Feasibility switches node selection to depth-first.
  Emphasis emphasis = Emphasis::Optimality;
  std::uint64_t seed = 0;
  /// Recorded only; the search runs on one worker.
  int workers = 1;
  /// Root strengthening passes before the search (0 = off).
  int strengthen_rounds = 1;
  /// Log a progress line every this many nodes (0 = silent).
  long log_every = 0;

  /// Throws InvariantError on non-positive tolerances or a negative gap.
  void validate() const;
};

/// Optimal: the incumbent is proven within rel_gap. GapReached: within
/// rel_gap, but nodes were dropped after LP failures. NumericalFailure: no
/// incumbent and some nodes could not be solved.
enum class SolveStatus { Optimal, GapReached, TimeLimit, Infeasible, Unbounded, NumericalFailure };
std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  /// Incumbent values for every model variable (empty when none found).
  std::vector<double> incumbent;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double best_bound = std::numeric_limits<double>::quiet_NaN();
  /// |objective - best_bound| / |best_bound|.
  double gap = std::numeric_limits<double>::infinity();
  long nodes_explored = 0;
  long lp_iterations = 0;
  double time_to_incumbent = 0.0;
  double time_total = 0.0;
  int workers = 1;

  bool has_incumbent() const { return !incumbent.empty(); }
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

/// LP relaxation in minimisation form: costs are multiplied by `sign`.
LpProblem relaxation(const MipModel& model, double sign = 1.0);

/// Relaxation of the model (binaries in [0,1]). Objective in model sense.
LpResult solve_lp(const MipModel& model);

/// Branch-and-bound over the binaries with LP relaxations at every node.
SolveResult solve_mip(const MipModel& model, const SolveConfig& config = {});

/// Independent re-check of an incumbent: names of violated rows, bounds and
/// integrality (empty when feasible).
std::vector<std::string> verify(const MipModel& model, const SolveResult& result, const SolveConfig& config = {});

/// Relative gap as reported by SolveResult.
double relative_gap(double objective, double bound);

}  // namespace molmip
