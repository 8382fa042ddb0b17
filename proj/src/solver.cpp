#include "molmip/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <queue>

#include <fmt/format.h>

#include "molmip/error.hpp"
#include "molmip/presolve.hpp"
#include "molmip/propagate.hpp"

namespace molmip {

std::string to_string(Emphasis e) { return e == Emphasis::Feasibility ? "feasibility" : "optimality"; }

Emphasis emphasis_from_string(const std::string& s) {
  if (s == "optimality") return Emphasis::Optimality;
  if (s == "feasibility") return Emphasis::Feasibility;
  throw ParseError("unknown emphasis '" + s + "' (expected optimality or feasibility)");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::GapReached: return "GapReached";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

void SolveConfig::validate() const {
  if (!(rel_gap >= 0.0)) throw InvariantError("rel_gap must be non-negative");
  if (!(feasibility_tol > 0.0) || !(integrality_tol > 0.0)) throw InvariantError("tolerances must be positive");
  if (!(time_limit > 0.0)) throw InvariantError("time_limit must be positive");
  if (workers < 1) throw InvariantError("workers must be at least 1");
  if (strengthen_rounds < 0) throw InvariantError("strengthen_rounds must be non-negative");
}

double relative_gap(double objective, double bound) {
  const double diff = std::abs(objective - bound);
  if (diff == 0.0) return 0.0;
  if (bound == 0.0) return std::numeric_limits<double>::infinity();
  return diff / std::abs(bound);
}

LpProblem relaxation(const MipModel& model, double sign) {
  LpProblem lp;
  const int n = model.num_variables();
  const int m = model.num_constraints();
  lp.cost = Eigen::VectorXd::Zero(n);
  for (const Term& t : model.objective().terms) lp.cost[t.var] += sign * t.coef;
  lp.col_lower.resize(n);
  lp.col_upper.resize(n);
  for (int j = 0; j < n; ++j) {
    lp.col_lower[j] = model.variable(j).lower;
    lp.col_upper[j] = model.variable(j).upper;
  }
  lp.row_lower.resize(m);
  lp.row_upper.resize(m);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < m; ++i) {
    const Constraint& c = model.constraints()[static_cast<std::size_t>(i)];
    for (const Term& t : c.terms) trip.emplace_back(i, t.var, t.coef);
    lp.row_lower[i] = c.sense == Sense::LessEqual ? -kInf : c.rhs;
    lp.row_upper[i] = c.sense == Sense::GreaterEqual ? kInf : c.rhs;
  }
  lp.a.resize(m, n);
  lp.a.setFromTriplets(trip.begin(), trip.end());
  return lp;
}

namespace {

using Clock = std::chrono::steady_clock;

double sense_sign(const MipModel& model) { return model.objective().sense == ObjSense::Maximize ? -1.0 : 1.0; }

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Node {
  double bound;  // minimisation form
  long id;
  int depth;
  std::vector<std::pair<int, std::int8_t>> fixes;
  std::shared_ptr<const LpBasis> basis;
};

struct BestFirst {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

LpResult solve_lp(const MipModel& model) {
  model.validate();
  const double sign = sense_sign(model);
  LpSolver lp(relaxation(model, sign));
  LpResult r;
  r.status = lp.solve();
  if (r.status == LpStatus::Optimal) {
    const Eigen::VectorXd x = lp.primal();
    r.x.assign(x.data(), x.data() + x.size());
    r.objective = model.objective_value(r.x);
  }
  return r;
}

SolveResult solve_mip(const MipModel& model, const SolveConfig& config) {
  config.validate();
  model.validate();
  const auto start = Clock::now();
  auto elapsed = [&]() { return std::chrono::duration<double>(Clock::now() - start).count(); };

  const double sign = sense_sign(model);
  const double constant = model.objective().constant;
  auto user = [&](double v) { return sign * v + constant; };

  SolveResult res;
  res.workers = config.workers;
  const NodeSelection selection =
      config.emphasis == Emphasis::Feasibility ? NodeSelection::DepthFirst : config.node_selection;
  const long log_every = config.emphasis == Emphasis::Feasibility ? 0 : config.log_every;

  const int n = model.num_variables();
  std::vector<int> binaries;
  for (int j = 0; j < n; ++j)
    if (model.variable(j).type == VarType::Binary) binaries.push_back(j);
  std::vector<std::uint64_t> tie_key(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    tie_key[static_cast<std::size_t>(j)] = config.seed == 0 ? static_cast<std::uint64_t>(j) : mix(config.seed ^ mix(j));

  const MipModel work = config.strengthen_rounds > 0 ? strengthen(model, config.strengthen_rounds, nullptr, config.time_limit) : model;
  const Propagator prop(work);
  Domain root_domain = prop.initial();
  LpSolver lp(relaxation(work, sign));
  lp.set_deadline(deadline_after(config.time_limit - elapsed()));
  Domain loaded = prop.initial();

  auto finish = [&](SolveStatus s) {
    res.status = s;
    res.lp_iterations = lp.iterations();
    res.time_total = elapsed();
    return res;
  };
  if (!prop.propagate(root_domain)) return finish(SolveStatus::Infeasible);

  auto load = [&](const Domain& d) {
    for (int j = 0; j < n; ++j)
      if (d.lower[j] != loaded.lower[j] || d.upper[j] != loaded.upper[j])
        lp.set_col_bounds(j, d.lower[j], d.upper[j]);
    loaded = d;
  };
  auto node_domain = [&](const std::vector<std::pair<int, std::int8_t>>& fixes) -> std::optional<Domain> {
    Domain d = root_domain;
    std::vector<int> changed;
    for (const auto& [j, v] : fixes) {
      if (v < d.lower[j] || v > d.upper[j]) return std::nullopt;
      d.lower[j] = d.upper[j] = v;
      changed.push_back(j);
    }
    if (!prop.propagate(d, changed)) return std::nullopt;
    return d;
  };

  bool have_inc = false;
  double inc = kInf;  // minimisation form
  auto prune_tol = [&]() { return 1e-9 * std::max(1.0, std::abs(inc)); };

  // Fixes every binary at its rounded value, re-solves and keeps the point
  // when it passes the independent feasibility check.
  auto try_incumbent = [&](const Eigen::VectorXd& x, const Domain& node) {
    Domain d = node;
    std::vector<int> changed;
    for (int j : binaries) {
      const double v = std::round(x[j]);
      if (d.lower[j] == d.upper[j]) continue;
      d.lower[j] = d.upper[j] = v;
      changed.push_back(j);
    }
    if (!prop.propagate(d, changed)) return false;
    const LpBasis saved = lp.basis();
    load(d);
    lp.set_cutoff(kInf);
    const LpStatus s = lp.solve();
    bool improved = false;
    if (s == LpStatus::Optimal) {
      const Eigen::VectorXd px = lp.primal();
      std::vector<double> point(px.data(), px.data() + px.size());
      for (int j : binaries) point[static_cast<std::size_t>(j)] = std::round(point[static_cast<std::size_t>(j)]);
      const double val = sign * (model.objective_value(point) - constant);
      if ((!have_inc || val < inc - prune_tol()) &&
          find_violations(model, point, config.feasibility_tol, config.integrality_tol).empty()) {
        have_inc = true;
        inc = val;
        res.incumbent = std::move(point);
        res.objective = model.objective_value(res.incumbent);
        res.time_to_incumbent = elapsed();
        improved = true;
      }
    }
    load(node);
    lp.set_basis(saved);
    return improved;
  };

  std::priority_queue<Node, std::vector<Node>, BestFirst> heap;
  std::vector<Node> stack;
  long next_id = 0;
  double lost_bound = kInf;  // nodes abandoned after numerical failure
  bool lost = false;
  double reported_bound = -kInf;

  auto open_bound = [&]() {
    double b = lost_bound;
    if (!heap.empty()) b = std::min(b, heap.top().bound);
    for (const Node& nd : stack) b = std::min(b, nd.bound);
    return b;
  };

  std::optional<Node> dive = Node{-kInf, next_id++, 0, {}, nullptr};
  bool timed_out = false;
  bool root = true;

  while (true) {
    bool jumped = false;
    if (!dive) {
      if (selection == NodeSelection::DepthFirst) {
        if (stack.empty()) break;
        dive = std::move(stack.back());
        stack.pop_back();
      } else {
        if (heap.empty()) break;
        dive = heap.top();
        heap.pop();
      }
      if (have_inc && dive->bound >= inc - prune_tol()) {
        dive.reset();
        continue;
      }
      jumped = true;
    }
    if (elapsed() > config.time_limit) {
      timed_out = true;
      break;
    }
    Node node = std::move(*dive);
    dive.reset();
    ++res.nodes_explored;
    const auto domain = node_domain(node.fixes);
    if (!domain) continue;
    load(*domain);
    if (jumped && node.basis) lp.set_basis(*node.basis);
    lp.set_cutoff(have_inc ? inc - prune_tol() : kInf);
    const LpStatus s = lp.solve();
    if (root) {
      root = false;
      if (s == LpStatus::Unbounded) return finish(SolveStatus::Unbounded);
    }
    if (s == LpStatus::Infeasible || s == LpStatus::Cutoff) continue;
    if (s != LpStatus::Optimal && elapsed() > config.time_limit) {
      timed_out = true;
      dive = std::move(node);
      break;
    }
    if (s != LpStatus::Optimal) {
      lost = true;
      lost_bound = std::min(lost_bound, node.bound);
      lp.reset_basis();
      continue;
    }
    const double obj = std::max(node.bound, lp.objective());
    if (have_inc && obj >= inc - prune_tol()) continue;
    const Eigen::VectorXd x = lp.primal();

    int branch = -1;
    int best_prio = 0;
    double best_frac = 0.0;
    for (int j : binaries) {
      const double f = std::abs(x[j] - std::round(x[j]));
      if (f <= config.integrality_tol) continue;
      const int prio = model.variable(j).branch_priority;
      if (branch >= 0 && prio < best_prio) continue;
      if (branch < 0 || prio > best_prio || f > best_frac + 1e-12 ||
          (f >= best_frac - 1e-12 && tie_key[static_cast<std::size_t>(j)] < tie_key[static_cast<std::size_t>(branch)])) {
        branch = j;
        best_prio = prio;
        best_frac = f;
      }
    }
    if (branch < 0) {
      try_incumbent(x, *domain);
    } else {
      auto basis = std::make_shared<const LpBasis>(lp.basis());
      const std::int8_t first = x[branch] >= 0.5 ? 1 : 0;
      Node near{obj, next_id++, node.depth + 1, node.fixes, basis};
      near.fixes.emplace_back(branch, first);
      Node far{obj, next_id++, node.depth + 1, std::move(node.fixes), basis};
      far.fixes.emplace_back(branch, static_cast<std::int8_t>(1 - first));
      if (selection == NodeSelection::DepthFirst)
        stack.push_back(std::move(far));
      else
        heap.push(std::move(far));
      dive = std::move(near);
    }

    double bound = std::min(open_bound(), dive ? dive->bound : kInf);
    if (have_inc) bound = std::min(bound, inc);
    if (std::isfinite(bound)) reported_bound = std::max(reported_bound, bound);
    if (log_every > 0 && res.nodes_explored % log_every == 0)
      fmt::print(stderr, "nodes {:>8}  open {:>6}  incumbent {:>14.6g}  bound {:>14.6g}  {:.1f}s\n", res.nodes_explored,
                 heap.size() + stack.size(), have_inc ? user(inc) : std::nan(""), user(reported_bound), elapsed());
    if (have_inc && relative_gap(user(inc), user(reported_bound)) <= config.rel_gap &&
        (dive || !heap.empty() || !stack.empty()) && config.rel_gap > 0.0) {
      res.best_bound = user(reported_bound);
      res.gap = relative_gap(res.objective, res.best_bound);
      return finish(lost ? SolveStatus::GapReached : SolveStatus::Optimal);
    }
  }

  if (timed_out) {
    double bound = std::min(open_bound(), dive ? dive->bound : kInf);
    if (have_inc) bound = std::min(bound, inc);
    if (std::isfinite(bound)) reported_bound = std::max(reported_bound, bound);
    res.best_bound = std::isfinite(reported_bound) ? user(reported_bound) : sign * -kInf;
    if (have_inc) res.gap = relative_gap(res.objective, res.best_bound);
    return finish(SolveStatus::TimeLimit);
  }
  if (!have_inc) return finish(lost ? SolveStatus::NumericalFailure : SolveStatus::Infeasible);
  const double final_bound = lost ? std::min(lost_bound, inc) : inc;
  res.best_bound = user(std::max(reported_bound, final_bound));
  res.gap = relative_gap(res.objective, res.best_bound);
  return finish(res.gap <= config.rel_gap ? (lost ? SolveStatus::GapReached : SolveStatus::Optimal)
                                          : SolveStatus::TimeLimit);
}

std::vector<std::string> verify(const MipModel& model, const SolveResult& result, const SolveConfig& config) {
  if (!result.has_incumbent()) return {};
  return find_violations(model, result.incumbent, config.feasibility_tol, config.integrality_tol);
}

}  // namespace molmip
