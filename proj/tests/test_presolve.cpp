#include "doctest.h"
#include "molmip/oracle.hpp"
#include "molmip/pipeline.hpp"
#include "molmip/presolve.hpp"
#include "molmip/propagate.hpp"
#include "molmip/solver.hpp"

using namespace molmip;

namespace {

std::vector<double> design_point(const DesignProblem& p, const GnnNetworkd& net, const MolecularGraph& g) {
  auto x = graph_point(g, p.model, p.map);
  lift_network_point(x, p.map, net, g.assignment());
  return x;
}

bool inside(const Domain& d, const std::vector<double>& x, double tol) {
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < d.lower[j] - tol || x[j] > d.upper[j] + tol) return false;
  return true;
}

}  // namespace

TEST_SUITE("presolve") {
TEST_CASE("propagation fixes implied binaries") {
  MipModel m;
  const int a = m.add_binary("a");
  const int b = m.add_binary("b");
  const int y = m.add_variable("y", 0, 10);
  m.add_constraint("pack", {{a, 1}, {b, 1}}, Sense::LessEqual, 1);
  m.add_constraint("link", {{y, 1}, {b, -4}}, Sense::LessEqual, 0);
  const Propagator prop(m);
  Domain d = prop.initial();
  d.lower[static_cast<std::size_t>(a)] = 1;
  REQUIRE(prop.propagate(d, {a}));
  CHECK(d.upper[static_cast<std::size_t>(b)] == 0.0);
  CHECK(d.upper[static_cast<std::size_t>(y)] == doctest::Approx(0.0).epsilon(1e-8));

  Domain e = prop.initial();
  e.lower[static_cast<std::size_t>(a)] = e.lower[static_cast<std::size_t>(b)] = 1;
  CHECK_FALSE(prop.propagate(e, {a, b}));
}

TEST_CASE("coefficient tightening keeps integer points") {
  MipModel m;
  const int x = m.add_variable("x", 0, 2);
  const int s = m.add_binary("s");
  m.add_constraint("bigm", {{x, 1}, {s, -10}}, Sense::LessEqual, 0);
  MipModel t = m;
  CHECK(tighten_coefficients(t) == 1);
  CHECK(t.constraints()[0].terms[1].coef == doctest::Approx(-2.0).epsilon(1e-6));
  for (double sv : {0.0, 1.0})
    for (double xv : {0.0, 1.0, 2.0}) {
      const std::vector<double> p{xv, sv};
      CHECK(find_violations(m, p).empty() == find_violations(t, p).empty());
    }
}

TEST_CASE("strengthening keeps every feasible design") {
  const DesignSpace s = banana_space(3);
  const auto opt = case_options(CaseStudy::Banana);
  for (int seed = 0; seed < 3; ++seed) {
    const GnnNetworkd net = fixture_network(seed, 3, s.n_features());
    const auto p = build_design_problem(net, s, opt);
    StrengthenStats stats;
    const MipModel work = strengthen(p.model, 1, &stats);
    CHECK(stats.rounds == 1);
    const Propagator prop(work);
    Domain d = prop.initial();
    REQUIRE(prop.propagate(d));
    for (const auto& g : collect_feasible(s, opt)) {
      const auto x = design_point(p, net, g);
      REQUIRE(find_violations(p.model, x, 1e-9).empty());
      CHECK(find_violations(work, x, 1e-6).empty());
      CHECK(inside(d, x, 1e-6));
    }
  }
}

TEST_CASE("strengthened and plain search agree") {
  const DesignSpace s = banana_space(3);
  const auto opt = case_options(CaseStudy::Banana);
  const GnnNetworkd net = fixture_network(7, 3, s.n_features());
  const auto p = build_design_problem(net, s, opt);
  SolveConfig plain;
  plain.strengthen_rounds = 0;
  const auto a = solve_mip(p.model, plain);
  const auto b = solve_mip(p.model);
  REQUIRE(a.status == SolveStatus::Optimal);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(std::abs(a.objective - b.objective) < 1e-6);
  CHECK(std::abs(b.objective - brute_optimum(net, s, opt)->objective) < 1e-6);
}
}
