#pragma once

// Exhaustive ground truth for small instances.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "molmip/design_space.hpp"
#include "molmip/gnn.hpp"
#include "molmip/molecule.hpp"

namespace molmip {

/// Calls `visit` for every graph satisfying the enabled constraint families,
/// in a fixed order: node count, then upper-triangle adjacency bits
/// (row-major, as a binary counter), then bond orders, then node types.
/// Returning false from `visit` stops the walk. Throws InvariantError when
/// N exceeds `max_nodes` or the structural family is disabled.
void enumerate_feasible(const DesignSpace& space, const ConstraintOptions& options,
                        const std::function<bool(const MolecularGraph&)>& visit, int max_nodes = 5);

std::vector<MolecularGraph> collect_feasible(const DesignSpace& space, const ConstraintOptions& options,
                                             int max_nodes = 5);

struct BruteOptimum {
  MolecularGraph graph;
  double objective = 0.0;
  long long evaluated = 0;
};

/// argmax of out[1] - out[0] over the feasible graphs; ties keep the first.
std::optional<BruteOptimum> brute_optimum(const GnnNetworkd& net, const DesignSpace& space,
                                          const ConstraintOptions& options, int max_nodes = 5);

/// Lexicographically smallest encoding of the graph over all node
/// permutations (features, then bond orders).
std::string canonical_form(const MolecularGraph& g);
/// Same for a bare adjacency (diagonal ignored).
std::string canonical_form(const Adjacency& a);

bool isomorphic(const MolecularGraph& a, const MolecularGraph& b);

/// True when A(u,v) for u<v has every node v >= 1 adjacent to an earlier one.
bool earlier_neighbour_condition(const Adjacency& a);
/// Non-increasing neighbour codes for consecutive nodes 1..N-2.
bool neighbour_order_condition(const Adjacency& a);

struct SymmetryGraphReport {
  int id = 0;
  int nodes = 0;
  int edges = 0;
  std::string edge_list;
  long long survivors = 0;  // permutations passing both conditions
  bool canonical_ok = false;
};

struct SymmetryReport {
  int n = 0;
  std::vector<SymmetryGraphReport> graphs;
  bool all_pass() const;
  std::string text() const;
  nlohmann::json to_json() const;
};

/// Every connected graph on n nodes (up to isomorphism): permutations
/// satisfying both ordering conditions and whether canonical_indexing finds
/// one. n in [1, 6].
SymmetryReport check_symmetry_existence(int n);

/// Counts over all N! relabellings of a molecule.
struct LabelingCascade {
  long long total = 0;
  long long violate_connectivity = 0;  // fail the earlier-neighbour rows
  long long after_connectivity = 0;
  long long after_features = 0;        // also pass the first-node rows
  long long after_neighbours = 0;      // also pass the neighbour-code rows
  std::vector<std::vector<int>> survivors;
};

LabelingCascade labeling_cascade(const MolecularGraph& g, const DesignSpace& space);

}  // namespace molmip
