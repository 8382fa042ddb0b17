#include <algorithm>
#include <numeric>
#include <random>

#include "case_fixtures.hpp"
#include "doctest.h"
#include "molmip/camd.hpp"
#include "molmip/oracle.hpp"

using namespace molmip;
using namespace molmip::fixtures;

namespace {

bool reports(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

ConstraintOptions structural_only() {
  ConstraintOptions o;
  o.dataset_bounds = o.symmetry_features = o.symmetry_neighbors = false;
  return o;
}

}  // namespace

TEST_SUITE("camd") {
TEST_CASE("atom space: ethane and dioxygen") {
  const DesignSpace s = atom_space(2);
  const auto ethane = build(s, {{0, 1, 1}}, {{0, 3}, {0, 3}});
  CHECK(validate(ethane, s).empty());
  const auto o2 = build(s, {{0, 1, 2}}, {{2, 0}, {2, 0}});
  CHECK(validate(o2, s).empty());
  auto wrong = ethane;
  wrong.set_node(1, s, 0, 2);  // three bonds for a four-valent carbon
  CHECK(reports(validate(wrong, s), "C21[1]"));
}

TEST_CASE("two double bonds pass C17 but not the flag equality") {
  const DesignSpace s = banana_space(4);
  const auto allene = build(s, {{0, 1, 2}, {1, 2, 2}, {2, 3, 1}}, {{1, 0}, {0, 0}, {0, 1}, {0, 3}});
  ConstraintOptions loose = case_options(CaseStudy::Banana);
  loose.double_bond_equality = false;
  CHECK(validate(allene, s, loose).empty());
  CHECK(validate(allene, s, case_options(CaseStudy::Banana)) == std::vector<std::string>{"C19eq[1]"});
}

TEST_CASE("case fixtures: satisfying and violating molecules") {
  for (const auto& f : case_fixtures()) {
    CAPTURE(f.family);
    const DesignSpace s = f.study == CaseStudy::Banana ? banana_space(4) : garlic_space(4);
    const auto opt = case_options(f.study);
    const auto good = validate(f.satisfying, s, opt);
    CHECK_MESSAGE(good.empty(), good.front());
    const auto bad = validate(f.violating, s, opt);
    CHECK(only_family(bad, f.family));
  }
}

TEST_CASE("case layout mismatch is rejected") {
  auto m = build_camd_model(atom_space(3));
  CHECK_THROWS_AS(add_case_constraints(m.model, m.map, atom_space(3), CaseStudy::Banana), InvariantError);
  CHECK_THROWS_AS(add_case_constraints(m.model, m.map, atom_space(3), CaseStudy::Garlic), InvariantError);
}

TEST_CASE("first-node rows on the atom space") {
  const DesignSpace s = atom_space(4);
  const auto g = methylaziridine(s);
  // nitrogen carries the smallest weighted type bit, so it must come first
  for (const auto& order : std::vector<std::vector<int>>{{0, 1, 2, 3}, {1, 0, 2, 3}, {3, 1, 0, 2}}) {
    const auto names = validate(relabel(g, order), s);
    CHECK(std::any_of(names.begin(), names.end(), [](const std::string& n) { return n.rfind("C26", 0) == 0; }));
  }
  CHECK(validate(relabel(g, {2, 1, 0, 3}), s).empty());
  auto ghost = MolecularGraph::empty(s);
  ghost.a(0, 0) = ghost.a(1, 1) = 1;
  ghost.add_bond(0, 1, 1);
  ghost.set_node(0, s, 0, 3);
  ghost.set_node(1, s, 0, 3);
  DesignSpace open = s;
  open.exact_n = false;
  ConstraintOptions opt;
  CHECK(validate(ghost, open, opt).empty());  // absent nodes never bind
}

TEST_CASE("neighbour rows") {
  const DesignSpace s = atom_space(4);
  const auto g = methylaziridine(s);
  const auto left = relabel(g, {2, 3, 1, 0});
  CHECK(reports(validate(left, s), "C5[1]"));
  const auto swapped = relabel(g, {2, 1, 3, 0});
  CHECK(validate(swapped, s) == std::vector<std::string>{"C27[2]"});

  Adjacency star = Adjacency::Identity(4, 4);
  for (int v = 1; v < 4; ++v) star(0, v) = star(v, 0) = 1;
  CHECK(neighbour_order_condition(star));
  Adjacency path = Adjacency::Identity(4, 4);
  for (int v = 0; v < 3; ++v) path(v, v + 1) = path(v + 1, v) = 1;
  CHECK(neighbour_order_condition(path));
}

TEST_CASE("type upper bounds of zero empty the design") {
  DesignSpace s = atom_space(3);
  for (auto& b : s.type_bounds) b.upper = 0;
  CHECK(collect_feasible(s, {}).empty());
}

TEST_CASE("trees have zero ring count") {
  const DesignSpace s = atom_space(4);
  DesignSpace tight = s;
  tight.ring_bounds = {0.0, 0.0};
  for (const auto& g : collect_feasible(s, structural_only())) {
    int edges = 0;
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v) edges += g.a(u, v);
    ConstraintOptions o = structural_only();
    o.dataset_bounds = true;
    CHECK(validate(g, tight, o).empty() == (edges == 3));
  }
}

TEST_CASE("ring upper bound reduces the count") {
  DesignSpace s = atom_space(4);
  const auto all = collect_feasible(s, structural_only()).size();
  s.ring_bounds.upper = 0;
  ConstraintOptions o = structural_only();
  o.dataset_bounds = true;
  const auto trees = collect_feasible(s, o).size();
  CHECK(trees < all);
  CHECK(trees > 0);
}

TEST_CASE("validate agrees with the emitted rows under bit flips") {
  std::mt19937_64 rng(21);
  for (auto [space, study] : {std::pair{atom_space(3), CaseStudy::None}, std::pair{banana_space(4), CaseStudy::Banana},
                              std::pair{garlic_space(3), CaseStudy::Garlic}}) {
    const ConstraintOptions opt = case_options(study);
    const auto m = build_camd_model(space, opt);
    auto graphs = collect_feasible(space, opt, 4);
    REQUIRE_FALSE(graphs.empty());
    std::shuffle(graphs.begin(), graphs.end(), rng);
    graphs.resize(std::min<std::size_t>(graphs.size(), 60));
    const int n = space.n_nodes, nf = space.n_features();
    int agree = 0, total = 0;
    for (const auto& g : graphs) {
      CHECK(find_violations(m.model, graph_point(g, m.model, m.map)).empty());
      for (int trial = 0; trial < 25; ++trial) {
        MolecularGraph h = g;
        const int kind = static_cast<int>(rng() % 3);
        const int u = static_cast<int>(rng() % n);
        int v = static_cast<int>(rng() % n);
        if (kind == 0) {
          const int f = static_cast<int>(rng() % nf);
          h.x(u, f) ^= 1;
        } else {
          if (u == v) v = (u + 1) % n;
          auto& mat = kind == 1 ? h.a : h.db;
          mat(u, v) ^= 1;
          mat(v, u) = mat(u, v);
        }
        const bool by_rows = find_violations(m.model, graph_point(h, m.model, m.map)).empty();
        const bool by_check = validate(h, space, opt).empty();
        agree += by_rows == by_check;
        ++total;
      }
    }
    CHECK(agree == total);
  }
}

TEST_CASE("decode inverts graph_point") {
  const DesignSpace s = atom_space(3);
  const auto m = build_camd_model(s);
  for (const auto& g : collect_feasible(s, {})) {
    const auto x = graph_point(g, m.model, m.map);
    const auto back = decode(x, m.map, s);
    CHECK(back.x == g.x);
    CHECK(back.a == g.a);
    CHECK(back.db == g.db);
    CHECK(back.tb == g.tb);
  }
  auto x = graph_point(collect_feasible(s, {}).front(), m.model, m.map);
  x[static_cast<std::size_t>(m.map.input_var(0, 0))] = 0.5;
  CHECK_THROWS_AS(decode(x, m.map, s), InvariantError);
}

TEST_CASE("row count formula") {
  for (const auto& name : {"atom", "banana", "garlic"})
    for (int n = 2; n <= 8; ++n)
      for (CaseStudy c : {CaseStudy::None, CaseStudy::Banana, CaseStudy::Garlic}) {
        if ((c == CaseStudy::Banana) != (std::string(name) == "banana") && c != CaseStudy::None) continue;
        if (c == CaseStudy::Garlic && std::string(name) != "garlic") continue;
        const DesignSpace s = preset_space(name, n);
        const auto opt = case_options(c);
        CHECK(design_constraint_count(s, opt) == build_camd_model(s, opt).model.num_constraints());
      }
}

TEST_CASE("canonical indexing") {
  const DesignSpace atoms = atom_space(4);
  const auto g = methylaziridine(atoms);
  std::vector<int> perm{0, 1, 2, 3};
  do {
    const auto shuffled = relabel(g, perm);
    const auto order = canonical_indexing(shuffled, atoms.ordering);
    REQUIRE(order.size() == 4);
    const auto r = relabel(shuffled, order);
    CHECK(validate(r, atoms).empty());
    CHECK(r.type_of(0, atoms) == 1);
  } while (std::next_permutation(perm.begin(), perm.end()));

  const DesignSpace s3 = atom_space(3);
  const auto path = build(s3, {{0, 1, 1}, {1, 2, 1}}, {{0, 3}, {0, 2}, {0, 3}});
  for (const auto& p : std::vector<std::vector<int>>{{0, 1, 2}, {1, 0, 2}, {2, 1, 0}}) {
    const auto shuffled = relabel(path, p);
    CHECK(validate(relabel(shuffled, canonical_indexing(shuffled, s3.ordering)), s3).empty());
  }

  auto split = MolecularGraph::empty(atoms);
  for (int v = 0; v < 4; ++v) split.a(v, v) = 1;
  split.add_bond(0, 1, 1);
  split.add_bond(2, 3, 1);
  CHECK_THROWS(canonical_indexing(split, atoms.ordering));
}

TEST_CASE("design space documents") {
  const DesignSpace b = banana_space(5);
  const DesignSpace back = space_from_json(space_to_json(b));
  CHECK(back.ordering == b.ordering);
  CHECK(back.n_features() == 14);
  CHECK(back.type_bounds[1].upper == 2.0);
  const DesignSpace p = space_from_json(nlohmann::json::parse(R"({"preset": "garlic", "n_nodes": 6, "exact_n": false})"));
  CHECK(p.n_features() == 17);
  CHECK_FALSE(p.exact_n);
  auto bad = space_to_json(b);
  bad["ordering"][0] = 3.0;
  CHECK_THROWS_AS(space_from_json(bad), InvariantError);
}

TEST_CASE("molecule documents") {
  const DesignSpace s = atom_space(4);
  const auto g = relabel(methylaziridine(s), {2, 1, 0, 3});
  const auto doc = molecule_to_json(g, s);
  CHECK(doc["nodes"].size() == 4);
  CHECK(doc["bonds"].size() == 4);
  const auto back = molecule_from_json(doc, s);
  CHECK(back.x == g.x);
  CHECK(back.a == g.a);
  CHECK(molecule_to_dot(g, s).find("graph") != std::string::npos);
}
}
