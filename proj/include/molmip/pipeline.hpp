#pragma once

#include <cstdint>

#include "molmip/camd.hpp"
#include "molmip/design_space.hpp"
#include "molmip/encode.hpp"
#include "molmip/gnn.hpp"
#include "molmip/molecule.hpp"

namespace molmip {

/// Network of the case-study shape: two SAGEConv (sum) layers with ReLU,
/// global mean pooling and a dense head, weights and biases uniform in
/// [-1, 1] from `seed`.
GnnNetworkd fixture_network(std::uint64_t seed, int n_nodes, int in_features, int hidden = 4, int outputs = 2);

/// GNN encoding + molecular constraints + logit-margin objective.
struct DesignProblem {
  MipModel model;
  VariableMap map;
  std::vector<LayerBounds> bounds;
  DesignSpace space;
  ConstraintOptions options;
};

/// Throws DimensionError when the network does not read N nodes with F
/// features each.
DesignProblem build_design_problem(const GnnNetworkd& net, const DesignSpace& space, const ConstraintOptions& options);

struct ProblemSize {
  long long variables = 0;
  long long binaries = 0;
  long long constraints = 0;
};

/// Closed-form counts of build_design_problem's output (see docs/formats.md);
/// ReLU stability is read from the propagated bounds.
ProblemSize design_problem_size(const GnnNetworkd& net, const DesignSpace& space, const ConstraintOptions& options);

}  // namespace molmip
