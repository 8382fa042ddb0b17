#pragma once

// Hand-built molecules for the case-study rows. Each entry names the row
// family it exercises, a molecule satisfying every enabled row, and one
// violating that family only.

#include <string>
#include <tuple>
#include <vector>

#include "molmip/molecule.hpp"

namespace molmip::fixtures {

struct NodeSpec {
  int type;
  int hydrogens;
};

struct BondSpec {
  int u, v, order;
};

inline MolecularGraph build(const DesignSpace& space, const std::vector<BondSpec>& bonds,
                            const std::vector<NodeSpec>& nodes) {
  MolecularGraph g = MolecularGraph::empty(space);
  for (int v = 0; v < space.n_nodes; ++v) g.a(v, v) = 1;
  for (const auto& b : bonds) g.add_bond(b.u, b.v, b.order);
  for (int v = 0; v < space.n_nodes; ++v)
    g.set_node(v, space, nodes[static_cast<std::size_t>(v)].type, nodes[static_cast<std::size_t>(v)].hydrogens);
  return g;
}

struct CaseFixture {
  std::string family;  // row stem, e.g. "B3"
  CaseStudy study;
  MolecularGraph satisfying;
  MolecularGraph violating;
};

// Banana types: 0 C, 1 O, 2 *C1CCCO1 (one attachment), 3 *C1CCC(*)C(*)C1 (three).
// Garlic types: 0 C, 1 N, 2 S, 3 O, 4 *C1CCCCC1*, 5 *C1CCC(*)O1, 6 *C1CCSC1.
inline std::vector<CaseFixture> case_fixtures() {
  const DesignSpace b = banana_space(4);
  const DesignSpace g = garlic_space(4);
  const auto B = CaseStudy::Banana;
  const auto G = CaseStudy::Garlic;
  // O=C(C)C with the oxygen first
  const auto acetone = build(b, {{0, 1, 2}, {1, 2, 1}, {1, 3, 1}}, {{1, 0}, {0, 0}, {0, 3}, {0, 3}});
  return {
      {"B1", B,
       build(b, {{0, 1, 1}, {1, 2, 2}, {1, 3, 1}}, {{2, 0}, {0, 0}, {1, 0}, {0, 3}}),
       build(b, {{0, 1, 2}, {1, 2, 1}, {1, 3, 1}}, {{1, 0}, {0, 0}, {2, 0}, {0, 3}})},
      {"B2", B, acetone,
       build(b, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, {{0, 3}, {0, 2}, {0, 2}, {0, 3}})},
      {"B3", B,
       build(b, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, {{3, 0}, {0, 3}, {0, 3}, {0, 3}}),
       build(b, {{0, 1, 2}, {0, 2, 1}, {1, 3, 1}}, {{3, 0}, {0, 1}, {0, 3}, {0, 3}})},
      {"B4", B,
       build(b, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, {{2, 0}, {1, 0}, {0, 2}, {0, 3}}),
       build(b, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, {{2, 0}, {1, 0}, {1, 0}, {0, 3}})},
      {"B5", B,
       build(b, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, {{3, 0}, {2, 0}, {0, 3}, {0, 3}}),
       build(b, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, {{3, 0}, {2, 0}, {2, 0}, {2, 0}})},
      {"C19eq", B, acetone,
       build(b, {{0, 1, 2}, {1, 2, 2}, {2, 3, 1}}, {{1, 0}, {0, 0}, {0, 1}, {0, 3}})},
      {"G1", G,
       build(g, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, {{3, 1}, {0, 2}, {0, 2}, {0, 3}}),
       build(g, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}}, {{3, 0}, {0, 2}, {0, 3}, {3, 1}})},
      {"G2", G,
       build(g, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}}, {{2, 0}, {0, 2}, {0, 3}, {0, 3}}),
       build(g, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}}, {{2, 0}, {2, 0}, {0, 3}, {0, 3}})},
      {"G3", G,
       build(g, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}}, {{4, 0}, {0, 2}, {0, 3}, {0, 3}}),
       build(g, {{0, 1, 2}, {1, 2, 1}, {2, 3, 1}}, {{4, 0}, {0, 1}, {0, 2}, {0, 3}})},
      {"G4", G,
       build(g, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}}, {{3, 0}, {0, 2}, {0, 3}, {0, 3}}),
       build(g, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}}, {{3, 0}, {3, 0}, {0, 3}, {0, 3}})},
      {"G5", G,
       build(g, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, {{6, 0}, {4, 0}, {0, 2}, {0, 3}}),
       build(g, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, {{6, 0}, {4, 0}, {4, 0}, {6, 0}})},
      {"C19eq", G,
       build(g, {{0, 1, 2}, {1, 2, 1}, {2, 3, 1}}, {{3, 0}, {0, 1}, {0, 2}, {0, 3}}),
       build(g, {{0, 1, 2}, {1, 2, 2}, {2, 3, 1}}, {{3, 0}, {0, 0}, {0, 1}, {0, 3}})},
  };
}

/// True when every reported name belongs to `family` and at least one does.
inline bool only_family(const std::vector<std::string>& names, const std::string& family) {
  if (names.empty()) return false;
  for (const auto& n : names)
    if (n != family && n.rfind(family + "[", 0) != 0) return false;
  return true;
}

/// 2-methylaziridine in the atom space: ring C0 (H2), C1 (H1), N2 (H1),
/// methyl C3 bonded to C1.
inline MolecularGraph methylaziridine(const DesignSpace& atoms) {
  return build(atoms, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {1, 3, 1}}, {{0, 2}, {0, 1}, {1, 1}, {0, 3}});
}

}  // namespace molmip::fixtures
