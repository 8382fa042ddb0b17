#pragma once

// Molecular-design constraints over the variables A (adjacency, diagonal =
// node existence), X (node features), DB / TB (double / triple bonds).
//
// A, DB and TB are symmetric and zero-diagonal by construction: one variable
// per unordered pair, so those conditions never appear as rows.

#include <span>

#include "molmip/bounds.hpp"
#include "molmip/design_space.hpp"
#include "molmip/encode.hpp"
#include "molmip/mip_model.hpp"
#include "molmip/molecule.hpp"

namespace molmip {

/// Adjacency fixing implied by the space: node existence under exact_n and
/// the first bond A(0,1) = 1.
AdjacencyFixing design_fixing(const DesignSpace& space);

/// Creates A[u][v] (u <= v) and X[v][f] unless the map already holds them,
/// then DB[u][v] / TB[u][v] for u < v.
void add_design_variables(MipModel& model, VariableMap& map, const DesignSpace& space);

/// C1, C2, C4, C5, C10-C21. With `double_bond_equality` the double-bond
/// flag row is X(v,db) = sum_u DB(u,v) (named C19eq[v]).
void add_structural_constraints(MipModel& model, const VariableMap& map, const DesignSpace& space,
                                bool double_bond_equality = false);

/// C22-C25 (two rows per finite two-sided bound).
void add_dataset_bounds(MipModel& model, const VariableMap& map, const DesignSpace& space);

/// sum_f h_f X(0,f) <= sum_f h_f X(v,f) + 2^F (1 - A(v,v)) for v >= 1.
/// Throws InvariantError unless `ordering` is a permutation of powers of two.
void add_symmetry_feature_constraint(MipModel& model, const VariableMap& map, const DesignSpace& space,
                                     const std::vector<double>& ordering, const std::string& stem = "C26");

/// Non-increasing neighbour codes for consecutive nodes 1..N-2.
void add_symmetry_neighbor_constraint(MipModel& model, const VariableMap& map, const DesignSpace& space);

/// Case-specific rows (B2-B5 or G1-G5). Throws InvariantError when the space
/// layout does not match the case.
void add_case_constraints(MipModel& model, const VariableMap& map, const DesignSpace& space, CaseStudy c);

/// Every family enabled in `options`; the banana case replaces C26 with B1.
void add_design_constraints(MipModel& model, const VariableMap& map, const DesignSpace& space,
                            const ConstraintOptions& options);

struct DesignModel {
  MipModel model;
  VariableMap map;
};

/// Molecular constraints alone (no network).
DesignModel build_camd_model(const DesignSpace& space, const ConstraintOptions& options = {});

/// Point with the graph's A, X, DB, TB values and zeros elsewhere.
std::vector<double> graph_point(const MolecularGraph& g, const MipModel& model, const VariableMap& map);

/// Reads the graph from a solution. Throws InvariantError when a graph
/// variable is not within 1e-6 of 0 or 1.
MolecularGraph decode(std::span<const double> x, const VariableMap& map, const DesignSpace& space);

/// Closed-form row counts of the molecular families for the space.
long long design_constraint_count(const DesignSpace& space, const ConstraintOptions& options);

}  // namespace molmip
