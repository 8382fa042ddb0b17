#include <random>

#include "doctest.h"
#include "molmip/pipeline.hpp"
#include "molmip/solver.hpp"
#include "tableau_oracle.hpp"

using namespace molmip;

TEST_SUITE("solver") {
TEST_CASE("lp: single bounded variable") {
  MipModel m;
  const int x = m.add_variable("x", 0, 1);
  m.set_objective(ObjSense::Maximize, {{x, 1.0}});
  const auto r = solve_lp(m);
  CHECK(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(1.0));
}

TEST_CASE("lp: shared capacity row") {
  MipModel m;
  const int x = m.add_variable("x", 0, 1);
  const int y = m.add_variable("y", 0, 1);
  m.add_constraint("cap", {{x, 1}, {y, 1}}, Sense::LessEqual, 1.5);
  m.set_objective(ObjSense::Maximize, {{x, 1}, {y, 1}});
  const auto r = solve_lp(m);
  CHECK(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(1.5));
}

TEST_CASE("lp: infeasible rows are reported") {
  MipModel m;
  const int x = m.add_variable("x", 0, 1);
  m.add_constraint("ge", {{x, 1}}, Sense::GreaterEqual, 2.0);
  CHECK(solve_lp(m).status == LpStatus::Infeasible);
}

TEST_CASE("lp: random 20x30 problems agree with a dense tableau") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-5, 5), unit(0, 1);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 20, cols = 30;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (unit(rng) < 0.4) a(i, j) = std::round(coef(rng) * 4) / 4;
    Eigen::VectorXd lo(cols), up(cols), c(cols);
    for (int j = 0; j < cols; ++j) {
      lo[j] = std::round(coef(rng));
      up[j] = lo[j] + 1 + std::round(4 * unit(rng));
      c[j] = std::round(coef(rng) * 4) / 4;
    }
    Eigen::VectorXd x0(cols);
    for (int j = 0; j < cols; ++j) x0[j] = lo[j] + unit(rng) * (up[j] - lo[j]);
    const Eigen::VectorXd act = a * x0;
    Eigen::VectorXd rlo(rows), rup(rows);
    for (int i = 0; i < rows; ++i) {
      const double slack = trial % 5 == 4 ? -2.0 : unit(rng) * 2;  // every fifth trial may be infeasible
      const int kind = static_cast<int>(unit(rng) * 3);
      rlo[i] = kind == 1 ? -kInf : act[i] - (kind == 2 ? 0 : slack);
      rup[i] = kind == 0 ? kInf : act[i] + slack;
      if (kind == 2) rlo[i] = rup[i] = std::round(act[i] * 4) / 4;
      if (rlo[i] > rup[i]) std::swap(rlo[i], rup[i]);
    }
    MipModel m;
    for (int j = 0; j < cols; ++j) m.add_variable("x" + std::to_string(j), lo[j], up[j]);
    for (int i = 0; i < rows; ++i) {
      std::vector<Term> t;
      for (int j = 0; j < cols; ++j)
        if (a(i, j) != 0) t.push_back({j, a(i, j)});
      if (rlo[i] == rup[i]) {
        m.add_constraint("e" + std::to_string(i), t, Sense::Equal, rlo[i]);
        continue;
      }
      if (std::isfinite(rlo[i])) m.add_constraint("l" + std::to_string(i), t, Sense::GreaterEqual, rlo[i]);
      if (std::isfinite(rup[i])) m.add_constraint("u" + std::to_string(i), t, Sense::LessEqual, rup[i]);
    }
    std::vector<Term> obj;
    for (int j = 0; j < cols; ++j) obj.push_back({j, c[j]});
    m.set_objective(ObjSense::Minimize, obj);
    const auto mine = solve_lp(m);
    const auto ref = oracle_lp::solve(a, c, lo, up, rlo, rup);
    CAPTURE(trial);
    REQUIRE(ref.feasible == (mine.status == LpStatus::Optimal));
    if (ref.feasible) {
      ++feasible;
      CHECK(mine.objective == doctest::Approx(ref.objective).epsilon(1e-7));
      CHECK(find_violations(m, mine.x, 1e-6).empty());
    }
  }
  CHECK(feasible > 30);
}

TEST_CASE("mip: binary knapsack") {
  MipModel m;
  const int a = m.add_binary("a");
  const int b = m.add_binary("b");
  m.add_constraint("cap", {{a, 1}, {b, 1}}, Sense::LessEqual, 1);
  m.set_objective(ObjSense::Maximize, {{a, 3}, {b, 2}});
  const auto r = solve_mip(m);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3));
  CHECK(r.incumbent[a] == 1.0);
  CHECK(verify(m, r).empty());
}

TEST_CASE("mip: infeasible binaries") {
  MipModel m;
  const int a = m.add_binary("a");
  const int b = m.add_binary("b");
  m.add_constraint("odd", {{a, 2}, {b, 2}}, Sense::Equal, 1);
  const auto r = solve_mip(m);
  CHECK(r.status == SolveStatus::Infeasible);
  CHECK_FALSE(r.has_incumbent());
}

TEST_CASE("mip: random binary programs match exhaustive search") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-6, 9);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 10, rows = 6;
    MipModel m;
    for (int j = 0; j < n; ++j) m.add_binary("b" + std::to_string(j));
    std::vector<std::vector<int>> a(rows, std::vector<int>(n));
    std::vector<int> rhs(rows);
    for (int i = 0; i < rows; ++i) {
      std::vector<Term> t;
      for (int j = 0; j < n; ++j) {
        a[i][j] = coef(rng);
        t.push_back({j, static_cast<double>(a[i][j])});
      }
      rhs[i] = 5 + coef(rng);
      m.add_constraint("r" + std::to_string(i), t, Sense::LessEqual, rhs[i]);
    }
    std::vector<int> c(n);
    std::vector<Term> obj;
    for (int j = 0; j < n; ++j) {
      c[j] = coef(rng);
      obj.push_back({j, static_cast<double>(c[j])});
    }
    m.set_objective(ObjSense::Maximize, obj);
    int best = std::numeric_limits<int>::min();
    for (int mask = 0; mask < (1 << n); ++mask) {
      bool ok = true;
      for (int i = 0; i < rows && ok; ++i) {
        int s = 0;
        for (int j = 0; j < n; ++j) s += ((mask >> j) & 1) * a[i][j];
        ok = s <= rhs[i];
      }
      if (!ok) continue;
      int v = 0;
      for (int j = 0; j < n; ++j) v += ((mask >> j) & 1) * c[j];
      best = std::max(best, v);
    }
    SolveConfig cfg;
    cfg.rel_gap = 0.0;
    const auto r = solve_mip(m, cfg);
    CAPTURE(trial);
    if (best == std::numeric_limits<int>::min()) {
      CHECK(r.status == SolveStatus::Infeasible);
    } else {
      REQUIRE(r.status == SolveStatus::Optimal);
      CHECK(r.objective == doctest::Approx(best));
      CHECK(verify(m, r).empty());
    }
  }
}

TEST_CASE("mip: identical runs give identical results") {
  MipModel m;
  std::vector<Term> obj;
  for (int j = 0; j < 12; ++j) {
    m.add_binary("b" + std::to_string(j));
    obj.push_back({j, 1.0 + (j % 5)});
  }
  std::vector<Term> cap;
  for (int j = 0; j < 12; ++j) cap.push_back({j, 2.0 + (j % 3)});
  m.add_constraint("cap", cap, Sense::LessEqual, 11.5);
  m.set_objective(ObjSense::Maximize, obj);
  SolveConfig cfg;
  cfg.seed = 42;
  const auto r1 = solve_mip(m, cfg);
  const auto r2 = solve_mip(m, cfg);
  CHECK(r1.objective == r2.objective);
  CHECK(r1.nodes_explored == r2.nodes_explored);
  CHECK(r1.incumbent == r2.incumbent);
  cfg.emphasis = Emphasis::Feasibility;
  const auto r3 = solve_mip(m, cfg);
  CHECK(r3.objective == doctest::Approx(r1.objective));
}

TEST_CASE("mip: a limit hit inside the root LP is a time-out") {
  const DesignSpace s = banana_space(4);
  const auto p = build_design_problem(fixture_network(0, 4, s.n_features()), s, case_options(CaseStudy::Banana));
  SolveConfig cfg;
  cfg.time_limit = 1e-6;
  cfg.strengthen_rounds = 0;
  const auto r = solve_mip(p.model, cfg);
  CHECK(r.status == SolveStatus::TimeLimit);
  CHECK_FALSE(r.has_incumbent());
}
}
