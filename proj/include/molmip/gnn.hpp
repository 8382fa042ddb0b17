#pragma once

// Message-passing GNNs in the uniform per-pair-weight form
//
//   x_v' = act( sum_{u : A(u,v) = 1} w_{u->v} x_u + b_v )
//
// where the diagonal entry A(v,v) gates node v's own contribution (node
// existence). Node-indexed state is stored flattened, node-major: entry
// v * d + f holds feature f of node v.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "molmip/error.hpp"

namespace molmip {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Binary N x N matrix. Off-diagonal entries are edges, diagonal entries
/// mark node existence.
using Adjacency = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class Activation { Identity, ReLU, Tanh, Sigmoid };
enum class GraphMode { Fixed, NonFixed };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

inline bool is_piecewise_linear(Activation a) {
  return a == Activation::Identity || a == Activation::ReLU;
}

template <typename Scalar>
  requires(!std::is_base_of_v<Eigen::EigenBase<Scalar>, Scalar>)
Scalar apply_activation(Activation a, Scalar x) {
  using std::exp;
  using std::tanh;
  switch (a) {
    case Activation::Identity: return x;
    case Activation::ReLU: return x > Scalar(0) ? x : Scalar(0);
    case Activation::Tanh: return tanh(x);
    case Activation::Sigmoid: return Scalar(1) / (Scalar(1) + exp(-x));
  }
  return x;
}

template <typename Derived>
auto apply_activation(Activation a, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([a](Scalar s) { return apply_activation(a, s); }).eval();
}

inline bool is_symmetric_binary(const Adjacency& a) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) > 1 || a(i, j) != a(j, i)) return false;
  return true;
}

template <typename Scalar>
struct GnnLayer {
  int n_nodes = 0;
  int in_features = 0;
  int out_features = 0;
  /// weights[u * n_nodes + v] is w_{u->v}, an (out x in) matrix.
  std::vector<Matrix<Scalar>> weights;
  /// One (out) vector per node.
  std::vector<Vector<Scalar>> biases;
  Activation activation = Activation::Identity;
  GraphMode graph_mode = GraphMode::NonFixed;
  /// Only meaningful for GraphMode::Fixed.
  Adjacency adjacency;

  static GnnLayer zeros(int n, int in, int out, GraphMode mode = GraphMode::NonFixed) {
    GnnLayer layer;
    layer.n_nodes = n;
    layer.in_features = in;
    layer.out_features = out;
    layer.weights.assign(static_cast<std::size_t>(n) * n, Matrix<Scalar>::Zero(out, in));
    layer.biases.assign(static_cast<std::size_t>(n), Vector<Scalar>::Zero(out));
    layer.graph_mode = mode;
    if (mode == GraphMode::Fixed) layer.adjacency = Adjacency::Zero(n, n);
    return layer;
  }

  const Matrix<Scalar>& weight(int u, int v) const { return weights[u * n_nodes + v]; }
  Matrix<Scalar>& weight(int u, int v) { return weights[u * n_nodes + v]; }

  int input_size() const { return n_nodes * in_features; }
  int output_size() const { return n_nodes * out_features; }

  void validate(const std::string& where = "layer") const {
    if (n_nodes <= 0 || in_features <= 0 || out_features <= 0)
      throw InvariantError(fmt::format("{}: n_nodes, in_features and out_features must be positive", where));
    if (weights.size() != static_cast<std::size_t>(n_nodes) * n_nodes)
      throw InvariantError(fmt::format("{}: weights: expected {}x{} grid of matrices", where, n_nodes, n_nodes));
    for (int u = 0; u < n_nodes; ++u)
      for (int v = 0; v < n_nodes; ++v) {
        const auto& w = weight(u, v);
        if (w.rows() != out_features || w.cols() != in_features)
          throw InvariantError(fmt::format("{}: weights[{}][{}]: expected {}x{}, got {}x{}", where, u, v,
                                           out_features, in_features, w.rows(), w.cols()));
      }
    if (biases.size() != static_cast<std::size_t>(n_nodes))
      throw InvariantError(fmt::format("{}: biases: expected {} node vectors", where, n_nodes));
    for (int v = 0; v < n_nodes; ++v)
      if (biases[v].size() != out_features)
        throw InvariantError(fmt::format("{}: biases[{}]: expected length {}, got {}", where, v, out_features,
                                         biases[v].size()));
    if (graph_mode == GraphMode::Fixed) {
      if (adjacency.rows() != n_nodes || adjacency.cols() != n_nodes)
        throw InvariantError(fmt::format("{}: adjacency: expected {}x{}", where, n_nodes, n_nodes));
      if (!is_symmetric_binary(adjacency))
        throw InvariantError(fmt::format("{}: adjacency must be symmetric and binary", where));
    }
  }
};

template <typename Scalar>
struct DenseLayer {
  Matrix<Scalar> weight;  // out x in
  Vector<Scalar> bias;
  Activation activation = Activation::Identity;

  int input_size() const { return static_cast<int>(weight.cols()); }
  int output_size() const { return static_cast<int>(weight.rows()); }

  void validate(const std::string& where = "layer") const {
    if (weight.rows() == 0 || weight.cols() == 0)
      throw InvariantError(fmt::format("{}: weights must be non-empty", where));
    if (bias.size() != weight.rows())
      throw InvariantError(fmt::format("{}: biases: expected length {}, got {}", where, weight.rows(), bias.size()));
  }
};

template <typename Scalar>
using Layer = std::variant<GnnLayer<Scalar>, DenseLayer<Scalar>>;

template <typename Scalar>
struct GnnNetwork {
  int n_nodes = 0;
  int input_features = 0;
  std::vector<Layer<Scalar>> layers;

  int input_size() const { return n_nodes * input_features; }

  int output_dim() const {
    if (layers.empty()) return input_size();
    return std::visit([](const auto& l) { return l.output_size(); }, layers.back());
  }

  /// Checks every layer plus the chaining rules: sizes chain, GNN layers see
  /// node-indexed input, and once the state is flat (a dense layer whose
  /// output is not a multiple of N) no GNN layer may follow.
  void validate() const {
    if (n_nodes <= 0 || input_features <= 0)
      throw InvariantError("network: n_nodes and input_features must be positive");
    int size = input_size();
    bool node_indexed = true;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string where = fmt::format("layer {}", i);
      if (const auto* g = std::get_if<GnnLayer<Scalar>>(&layers[i])) {
        g->validate(where);
        if (g->n_nodes != n_nodes)
          throw InvariantError(fmt::format("{}: n_nodes {} differs from network n_nodes {}", where, g->n_nodes, n_nodes));
        if (!node_indexed)
          throw InvariantError(fmt::format("{}: GNN layer after the pooling boundary", where));
        if (g->input_size() != size)
          throw InvariantError(fmt::format("{}: in_features {} does not chain with previous output size {}", where,
                                           g->in_features, size));
        size = g->output_size();
      } else {
        const auto& d = std::get<DenseLayer<Scalar>>(layers[i]);
        d.validate(where);
        if (d.input_size() != size)
          throw InvariantError(fmt::format("{}: in_features {} does not chain with previous output size {}", where,
                                           d.input_size(), size));
        size = d.output_size();
        if (size % n_nodes != 0) node_indexed = false;
      }
    }
  }
};

template <typename Scalar>
struct NodeFeatureAssignment {
  Matrix<Scalar> features;  // N x d0
  Adjacency adjacency;      // N x N, diagonal = node existence

  /// Node-major flattening of the feature matrix.
  Vector<Scalar> flat_features() const {
    Vector<Scalar> x(features.size());
    for (Eigen::Index v = 0; v < features.rows(); ++v)
      x.segment(v * features.cols(), features.cols()) = features.row(v).transpose();
    return x;
  }
};

template <typename Scalar>
struct LayerTrace {
  Vector<Scalar> pre;   // before activation
  Vector<Scalar> post;  // after activation
};

/// Pre-activation values of one GNN layer for a flattened input.
template <typename Scalar>
Vector<Scalar> gnn_preactivation(const GnnLayer<Scalar>& layer, const Adjacency& adjacency,
                                 const Vector<Scalar>& input) {
  const int n = layer.n_nodes;
  const int in = layer.in_features;
  const int out = layer.out_features;
  Vector<Scalar> pre(n * out);
  for (int v = 0; v < n; ++v) {
    Vector<Scalar> acc = layer.biases[v];
    for (int u = 0; u < n; ++u) {
      if (adjacency(u, v) == 0) continue;
      acc.noalias() += layer.weight(u, v) * input.segment(u * in, in);
    }
    pre.segment(v * out, out) = acc;
  }
  return pre;
}

template <typename Scalar>
void check_assignment(const GnnNetwork<Scalar>& net, const NodeFeatureAssignment<Scalar>& assign) {
  if (assign.features.rows() != net.n_nodes || assign.features.cols() != net.input_features)
    throw DimensionError(fmt::format("features: expected {}x{}, got {}x{}", net.n_nodes, net.input_features,
                                     assign.features.rows(), assign.features.cols()));
  if (assign.adjacency.rows() != net.n_nodes || assign.adjacency.cols() != net.n_nodes)
    throw DimensionError(fmt::format("adjacency: expected {}x{}, got {}x{}", net.n_nodes, net.n_nodes,
                                     assign.adjacency.rows(), assign.adjacency.cols()));
  if (!is_symmetric_binary(assign.adjacency)) throw DimensionError("adjacency must be symmetric and binary");
}

/// Layer-by-layer evaluation keeping every intermediate value.
template <typename Scalar>
std::vector<LayerTrace<Scalar>> forward_trace(const GnnNetwork<Scalar>& net,
                                              const NodeFeatureAssignment<Scalar>& assign) {
  check_assignment(net, assign);
  std::vector<LayerTrace<Scalar>> trace;
  trace.reserve(net.layers.size());
  Vector<Scalar> state = assign.flat_features();
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    LayerTrace<Scalar> t;
    if (const auto* g = std::get_if<GnnLayer<Scalar>>(&net.layers[i])) {
      if (state.size() != g->input_size())
        throw DimensionError(fmt::format("layer {}: input size {} but state has {}", i, g->input_size(), state.size()));
      if (g->graph_mode == GraphMode::Fixed && g->adjacency != assign.adjacency)
        throw DimensionError(fmt::format("layer {}: adjacency conflicts with the fixed graph of this layer", i));
      t.pre = gnn_preactivation(*g, assign.adjacency, state);
      t.post = apply_activation(g->activation, t.pre);
    } else {
      const auto& d = std::get<DenseLayer<Scalar>>(net.layers[i]);
      if (state.size() != d.input_size())
        throw DimensionError(fmt::format("layer {}: input size {} but state has {}", i, d.input_size(), state.size()));
      t.pre = d.weight * state + d.bias;
      t.post = apply_activation(d.activation, t.pre);
    }
    state = t.post;
    trace.push_back(std::move(t));
  }
  return trace;
}

template <typename Scalar>
Vector<Scalar> forward(const GnnNetwork<Scalar>& net, const NodeFeatureAssignment<Scalar>& assign) {
  if (net.layers.empty()) {
    check_assignment(net, assign);
    return assign.flat_features();
  }
  return forward_trace(net, assign).back().post;
}

using GnnLayerd = GnnLayer<double>;
using DenseLayerd = DenseLayer<double>;
using Layerd = Layer<double>;
using GnnNetworkd = GnnNetwork<double>;
using Assignment = NodeFeatureAssignment<double>;

}  // namespace molmip
