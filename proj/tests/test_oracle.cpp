#include <set>

#include "case_fixtures.hpp"
#include "doctest.h"
#include "molmip/oracle.hpp"
#include "molmip/pipeline.hpp"

using namespace molmip;

namespace {

ConstraintOptions without_symmetry(ConstraintOptions o = {}) {
  o.symmetry_features = o.symmetry_neighbors = false;
  return o;
}

std::set<std::string> classes(const std::vector<MolecularGraph>& graphs) {
  std::set<std::string> out;
  for (const auto& g : graphs) out.insert(canonical_form(g));
  return out;
}

}  // namespace

TEST_SUITE("oracle") {
TEST_CASE("two-node atom space by hand") {
  // single bonds: 4 x 4 type pairs; double: 4 x 4; triple: C/N only, 2 x 2
  const DesignSpace s = atom_space(2);
  CHECK(collect_feasible(s, without_symmetry()).size() == 36);
  // ordered pairs with distinct types collapse: 6 + 6 + 1 removed
  CHECK(collect_feasible(s, {}).size() == 23);
}

TEST_CASE("every enumerated graph validates") {
  for (auto [s, c] : {std::pair{atom_space(3), CaseStudy::None}, std::pair{banana_space(3), CaseStudy::Banana},
                      std::pair{garlic_space(3), CaseStudy::Garlic}}) {
    const auto opt = case_options(c);
    long long n = 0;
    enumerate_feasible(s, opt, [&](const MolecularGraph& g) {
      CHECK(validate(g, s, opt).empty());
      ++n;
      return true;
    });
    CHECK(n > 0);
  }
}

TEST_CASE("symmetry rows keep the isomorphism classes") {
  for (const auto& name : {"atom", "banana"})
    for (int n = 2; n <= 3; ++n) {
      const DesignSpace s = preset_space(name, n);
      const auto with = collect_feasible(s, {});
      const auto without = collect_feasible(s, without_symmetry());
      CHECK(with.size() < without.size());
      CHECK(classes(with) == classes(without));
    }
}

TEST_CASE("non-exact mode also enumerates smaller molecules") {
  DesignSpace s = atom_space(3);
  s.exact_n = false;
  const auto all = collect_feasible(s, {});
  std::set<int> sizes;
  for (const auto& g : all) sizes.insert(g.a.diagonal().cast<int>().sum());
  CHECK(sizes == std::set<int>{2, 3});
}

TEST_CASE("enumeration stops on request and rejects large spaces") {
  int seen = 0;
  enumerate_feasible(atom_space(3), {}, [&](const MolecularGraph&) { return ++seen < 5; });
  CHECK(seen == 5);
  CHECK_THROWS_AS(collect_feasible(atom_space(6), {}), InvariantError);
}

TEST_CASE("brute optimum on constant and zero-weight networks") {
  const DesignSpace s = atom_space(3);
  GnnNetworkd net = fixture_network(4, 3, s.n_features());
  auto& head = std::get<DenseLayerd>(net.layers.back());
  head.weight.setZero();
  head.bias = Eigen::Vector2d(0.25, 1.5);
  const auto best = brute_optimum(net, s, {});
  REQUIRE(best);
  CHECK(best->objective == 1.25);
  CHECK(canonical_form(best->graph) == canonical_form(collect_feasible(s, {}).front()));
  CHECK(best->evaluated == static_cast<long long>(collect_feasible(s, {}).size()));
}

TEST_CASE("brute optimum dominates every feasible graph") {
  const DesignSpace s = banana_space(3);
  const auto opt = case_options(CaseStudy::Banana);
  const GnnNetworkd net = fixture_network(2, 3, s.n_features());
  const auto best = brute_optimum(net, s, opt);
  REQUIRE(best);
  for (const auto& g : collect_feasible(s, opt)) {
    const auto y = forward(net, g.assignment());
    CHECK(y(1) - y(0) <= best->objective);
  }
}

TEST_CASE("isomorphism by canonical form") {
  const DesignSpace s = atom_space(4);
  const auto g = fixtures::methylaziridine(s);
  CHECK(isomorphic(g, relabel(g, {3, 2, 1, 0})));
  auto h = g;
  h.set_node(3, s, 1, 2);
  CHECK_FALSE(isomorphic(g, h));
  Adjacency p(3, 3), q(3, 3);
  p << 1, 1, 0, 1, 1, 1, 0, 1, 1;
  q << 1, 0, 1, 0, 1, 1, 1, 1, 1;
  CHECK(canonical_form(p) == canonical_form(q));
}

TEST_CASE("symmetry existence for small n") {
  const std::vector<std::size_t> connected{1, 1, 2, 6, 21};
  for (int n = 1; n <= 5; ++n) {
    const auto r = check_symmetry_existence(n);
    CHECK(r.graphs.size() == connected[static_cast<std::size_t>(n - 1)]);
    CHECK(r.all_pass());
  }
  const auto r3 = check_symmetry_existence(3);
  CHECK(r3.text().find("classes=2") != std::string::npos);
  CHECK(r3.to_json()["all_pass"] == true);
  CHECK_THROWS_AS(check_symmetry_existence(7), InvariantError);
}

TEST_CASE("methylaziridine cascade") {
  const DesignSpace s = atom_space(4);
  const auto c = labeling_cascade(fixtures::methylaziridine(s), s);
  CHECK(c.total == 24);
  CHECK(c.violate_connectivity == 10);
  CHECK(c.after_connectivity == 14);
  CHECK(c.after_neighbours == 1);
  REQUIRE(c.survivors.size() == 1);
  CHECK(c.survivors[0][0] == 2);
}
}
