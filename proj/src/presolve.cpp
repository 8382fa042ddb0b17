#include "molmip/presolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "molmip/lp.hpp"
#include "molmip/propagate.hpp"
#include "molmip/solver.hpp"

namespace molmip {

int tighten_coefficients(MipModel& model) {
  int changed = 0;
  for (int i = 0; i < model.num_constraints(); ++i) {
    const Constraint& c = model.constraints()[static_cast<std::size_t>(i)];
    if (c.sense == Sense::Equal) continue;
    const double sigma = c.sense == Sense::LessEqual ? 1.0 : -1.0;
    std::vector<Term> terms = c.terms;
    for (Term& t : terms) t.coef *= sigma;
    double rhs = sigma * c.rhs;
    bool row_changed = false;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const Variable& vk = model.variable(terms[k].var);
      if (vk.type != VarType::Binary || vk.lower == vk.upper) continue;
      double rest = 0.0;
      for (std::size_t j = 0; j < terms.size() && std::isfinite(rest); ++j) {
        if (j == k) continue;
        const Variable& v = model.variable(terms[j].var);
        rest += std::max(terms[j].coef * v.lower, terms[j].coef * v.upper);
      }
      if (!std::isfinite(rest)) continue;
      const double a = terms[k].coef;
      const double slack = 1e-7 * (1.0 + std::abs(rhs));
      if (a > 0.0 && rest < rhs && rest + a > rhs) {
        const double d = rhs - rest - slack;
        if (d <= 1e-6 * (1.0 + std::abs(a))) continue;
        terms[k].coef -= d;
        rhs -= d;
        row_changed = true;
        ++changed;
      } else if (a < 0.0 && rest + a < rhs && rest > rhs) {
        const double d = rhs - rest - a - slack;
        if (d <= 1e-6 * (1.0 + std::abs(a))) continue;
        terms[k].coef += d;
        row_changed = true;
        ++changed;
      }
    }
    if (!row_changed) continue;
    for (Term& t : terms) t.coef *= sigma;
    model.set_row(i, std::move(terms), sigma * rhs);
  }
  return changed;
}

MipModel strengthen(const MipModel& model, int rounds, StrengthenStats* stats, double time_budget) {
  const auto deadline = deadline_after(time_budget);
  auto out_of_time = [&] { return std::chrono::steady_clock::now() > deadline; };
  MipModel work = model;
  StrengthenStats st;
  const int n = work.num_variables();
  std::vector<char> candidate(static_cast<std::size_t>(n), 0);
  for (const Constraint& c : work.constraints()) {
    const bool has_binary = std::any_of(c.terms.begin(), c.terms.end(),
                                        [&](const Term& t) { return work.variable(t.var).type == VarType::Binary; });
    if (!has_binary) continue;
    for (const Term& t : c.terms)
      if (work.variable(t.var).type == VarType::Continuous) candidate[static_cast<std::size_t>(t.var)] = 1;
  }

  bool stopped = false;
  for (int round = 0; round < rounds && !stopped; ++round) {
    ++st.rounds;
    int tightened = 0;
    LpProblem prob = relaxation(work, 1.0);
    prob.cost.setZero();
    LpSolver lp(std::move(prob));
    lp.set_deadline(deadline);
    if (lp.solve() != LpStatus::Optimal) break;
    std::vector<char> done_min(static_cast<std::size_t>(n), 0), done_max(static_cast<std::size_t>(n), 0);
    auto mark = [&](const Eigen::VectorXd& x) {
      for (int j = 0; j < n; ++j) {
        if (x[j] <= lp.col_lower(j) + 1e-9) done_min[static_cast<std::size_t>(j)] = 1;
        if (x[j] >= lp.col_upper(j) - 1e-9) done_max[static_cast<std::size_t>(j)] = 1;
      }
    };
    mark(lp.primal());
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (!candidate[static_cast<std::size_t>(j)] || lp.col_lower(j) == lp.col_upper(j)) continue;
      if (out_of_time()) {
        stopped = true;
        break;
      }
      for (int dir = 0; dir < 2; ++dir) {
        if ((dir == 0 ? done_min : done_max)[static_cast<std::size_t>(j)]) continue;
        cost.setZero();
        cost[j] = dir == 0 ? 1.0 : -1.0;
        lp.set_cost(cost);
        if (lp.solve(50000) != LpStatus::Optimal) continue;
        const Eigen::VectorXd x = lp.primal();
        mark(x);
        const double v = x[j];
        const double pad = 1e-6 * (1.0 + std::abs(v));
        double lo = lp.col_lower(j), up = lp.col_upper(j);
        const double range = std::isfinite(up - lo) ? up - lo : kInf;
        if (dir == 0 && v - pad > lo + 1e-4 * std::min(1.0, range)) lo = v - pad;
        else if (dir == 1 && v + pad < up - 1e-4 * std::min(1.0, range)) up = v + pad;
        else continue;
        if (lo > up) continue;
        lp.set_col_bounds(j, lo, up);
        work.set_bounds(j, lo, up);
        ++tightened;
      }
    }
    st.lp_iterations += lp.iterations();
    Propagator prop(work);
    Domain d = prop.initial();
    if (prop.propagate(d))
      for (int j = 0; j < n; ++j)
        if (work.variable(j).type == VarType::Continuous &&
            (d.lower[static_cast<std::size_t>(j)] > work.variable(j).lower || d.upper[static_cast<std::size_t>(j)] < work.variable(j).upper))
          work.set_bounds(j, d.lower[static_cast<std::size_t>(j)], d.upper[static_cast<std::size_t>(j)]);
    const int coefs = tighten_coefficients(work);
    st.bounds_tightened += tightened;
    st.coefficients_tightened += coefs;
    if (tightened == 0 && coefs == 0) break;
  }
  if (stats) *stats = st;
  return work;
}

}  // namespace molmip
