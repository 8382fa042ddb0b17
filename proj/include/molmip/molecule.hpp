#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "molmip/design_space.hpp"
#include "molmip/gnn.hpp"

namespace molmip {

using FeatureMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Node features X (N x F), adjacency A with A(v,v) marking node existence,
/// and symmetric double / triple bond indicators with zero diagonals.
struct MolecularGraph {
  FeatureMatrix x;
  Adjacency a;
  Adjacency db;
  Adjacency tb;

  static MolecularGraph empty(const DesignSpace& space);
  int n_nodes() const { return static_cast<int>(a.rows()); }
  bool exists(int v) const { return a(v, v) != 0; }
  int degree(int v) const;
  int type_of(int v, const DesignSpace& space) const;
  int bond_order(int u, int v) const;
  /// Sets the feature row of v from its type, bonds and hydrogen count.
  void set_node(int v, const DesignSpace& space, int type, int hydrogens);
  /// Adds a bond of order 1, 2 or 3 between existing nodes.
  void add_bond(int u, int v, int order);

  Assignment assignment() const;
};

/// Which constraint families are active.
struct ConstraintOptions {
  bool structural = true;         // C1-C21
  bool dataset_bounds = true;     // C22-C25
  bool symmetry_features = true;  // C26 (B1 for the banana case)
  bool symmetry_neighbors = true; // C27
  /// Each node carries at most one double bond: X(v,db) = sum_u DB(u,v).
  bool double_bond_equality = false;
  CaseStudy case_study = CaseStudy::None;
};

/// Options used for a case study: the banana and garlic cases switch on the
/// double-bond equality.
ConstraintOptions case_options(CaseStudy c);

/// Ordering weights used in the first-node symmetry rows. The banana case
/// always uses its rearranged vector.
std::vector<double> symmetry_ordering(const DesignSpace& space, CaseStudy c);

/// Direct evaluation of every enabled constraint on a candidate graph.
/// Returns the names of violated rows, using the same names the encoder
/// gives them (e.g. "C5[2]", "C27[1]", "G2[0][3]"), plus "C3", "C6"-"C9"
/// style names for the conditions the encoding satisfies by construction.
std::vector<std::string> validate(const MolecularGraph& g, const DesignSpace& space,
                                  const ConstraintOptions& options = {});

inline bool is_feasible(const MolecularGraph& g, const DesignSpace& space, const ConstraintOptions& options = {}) {
  return validate(g, space, options).empty();
}

/// Weighted feature sum sum_f h_f X(v,f).
double feature_sum(const MolecularGraph& g, int v, const std::vector<double>& ordering);

/// Graph with nodes relabelled: node order[k] of `g` becomes node k.
MolecularGraph relabel(const MolecularGraph& g, const std::vector<int>& order);

/// Node order satisfying the ordering symmetry conditions: node 0 has the
/// minimal weighted feature sum, and for every v in 1..N-2 the neighbour
/// codes sum_{u != v, v+1} 2^(N-u-1) A(u,v) are non-increasing. Searches
/// depth-first with a greedy preference and backtracks on violation.
/// Throws InvariantError unless every node exists and the graph is
/// connected; returns an empty vector when no admissible order exists.
std::vector<int> canonical_indexing(const MolecularGraph& g, const std::vector<double>& ordering);

/// JSON molecule: {"nodes": [{"index", "type", "hydrogens", "neighbors",
/// "double_bond", "triple_bond"}], "bonds": [{"u", "v", "order"}]}.
nlohmann::json molecule_to_json(const MolecularGraph& g, const DesignSpace& space);
MolecularGraph molecule_from_json(const nlohmann::json& doc, const DesignSpace& space);
std::string molecule_to_dot(const MolecularGraph& g, const DesignSpace& space);

}  // namespace molmip
