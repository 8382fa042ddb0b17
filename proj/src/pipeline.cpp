#include "molmip/pipeline.hpp"

#include <random>

#include <fmt/format.h>

#include "molmip/error.hpp"
#include "molmip/transforms.hpp"

namespace molmip {

GnnNetworkd fixture_network(std::uint64_t seed, int n_nodes, int in_features, int hidden, int outputs) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random = [&](int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = uni(rng);
    return m;
  };
  GnnNetworkd net;
  net.n_nodes = n_nodes;
  net.input_features = in_features;
  int in = in_features;
  for (int l = 0; l < 2; ++l) {
    OpSpec<double> sage;
    sage.kind = OpKind::SAGEConvSum;
    sage.n_nodes = n_nodes;
    sage.w = random(hidden, in);
    sage.w_neighbor = random(hidden, in);
    sage.b = random(hidden, 1).col(0);
    sage.activation = Activation::ReLU;
    net.layers.emplace_back(transform_sage(sage));
    in = hidden;
  }
  OpSpec<double> pool;
  pool.kind = OpKind::GlobalMeanPool;
  net.layers.emplace_back(transform_pool(pool, n_nodes, hidden));
  DenseLayerd head;
  head.weight = random(outputs, hidden);
  head.bias = random(outputs, 1).col(0);
  head.activation = Activation::Identity;
  net.layers.emplace_back(head);
  net.validate();
  return net;
}

namespace {

void check_shapes(const GnnNetworkd& net, const DesignSpace& space) {
  space.validate();
  if (net.n_nodes != space.n_nodes || net.input_features != space.n_features())
    throw DimensionError(fmt::format("network reads {} nodes x {} features, space {} has {} x {}", net.n_nodes,
                                     net.input_features, space.name, space.n_nodes, space.n_features()));
}

}  // namespace

DesignProblem build_design_problem(const GnnNetworkd& net, const DesignSpace& space, const ConstraintOptions& options) {
  check_shapes(net, space);
  EncodedNetwork enc = encode_network(net, design_fixing(space));
  add_design_variables(enc.model, enc.map, space);
  add_design_constraints(enc.model, enc.map, space, options);
  set_objective_logit_margin(enc.model, enc.map);
  for (const auto* group : {&enc.map.a, &enc.map.x.front(), &enc.map.db, &enc.map.tb})
    for (int j : *group)
      if (j >= 0) enc.model.set_branch_priority(j, 1);
  return {std::move(enc.model), std::move(enc.map), std::move(enc.bounds), space, options};
}

ProblemSize design_problem_size(const GnnNetworkd& net, const DesignSpace& space, const ConstraintOptions& options) {
  check_shapes(net, space);
  const AdjacencyFixing fixing = design_fixing(space);
  const auto bounds = propagate(net, IntervalBox::constant(net.n_nodes * net.input_features, 0.0, 1.0), fixing);
  const EncodingSize e = network_encoding_size(net, fixing, bounds);
  const long long n = space.n_nodes;
  const long long bonds = n * (n - 1) / 2 * (space.has_triple() ? 2 : 1);
  return {e.variables + bonds, e.binaries + bonds, e.constraints + design_constraint_count(space, options)};
}

}  // namespace molmip
