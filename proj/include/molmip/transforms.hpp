#pragma once

// Rewrites common graph operations into GnnLayer / DenseLayer form.
//
// Supported (kind, graph mode) pairs:
//
//   kind             fixed  non-fixed
//   Linear             y        y
//   GCNConv            y        n    (normalisation depends on A)
//   SAGEConvSum        y        y
//   MeanAggregation    y        n    (divides by a variable degree)
//   SumAggregation     y        y
//   GlobalMeanPool     y        y    (divides by the constant N)
//   GlobalAddPool      y        y

#include <cmath>
#include <string>

#include "molmip/gnn.hpp"

namespace molmip {

enum class OpKind { Linear, GCNConv, SAGEConvSum, MeanAggregation, SumAggregation, GlobalMeanPool, GlobalAddPool };

std::string to_string(OpKind k);
OpKind op_kind_from_string(const std::string& s);

inline bool is_supported(OpKind kind, GraphMode mode) {
  if (mode == GraphMode::Fixed) return true;
  return kind != OpKind::GCNConv && kind != OpKind::MeanAggregation;
}

template <typename Scalar>
struct OpSpec {
  OpKind kind = OpKind::Linear;
  GraphMode graph_mode = GraphMode::NonFixed;
  Adjacency adjacency;  // FixedGraph only
  int n_nodes = 0;
  /// Per-node feature count; used by aggregations and pools.
  int features = 0;
  /// Linear / GCNConv weight (out x in), and SAGEConv self weight.
  Matrix<Scalar> w;
  /// SAGEConv neighbour weight (out x in).
  Matrix<Scalar> w_neighbor;
  Vector<Scalar> b;
  Activation activation = Activation::Identity;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvariantError(msg);
}

template <typename Scalar>
void require_supported(const OpSpec<Scalar>& spec) {
  if (is_supported(spec.kind, spec.graph_mode)) return;
  if (spec.kind == OpKind::GCNConv)
    throw UnsupportedOperation(
        "GCNConv on a non-fixed graph: the degree normalisation makes the layer nonlinear in A");
  throw UnsupportedOperation(fmt::format("{} is not supported on a non-fixed graph", to_string(spec.kind)));
}

template <typename Scalar>
void require_fixed_adjacency(const OpSpec<Scalar>& spec) {
  require(spec.adjacency.rows() == spec.n_nodes && spec.adjacency.cols() == spec.n_nodes,
          fmt::format("{}: adjacency must be {}x{}", to_string(spec.kind), spec.n_nodes, spec.n_nodes));
  require(is_symmetric_binary(spec.adjacency), fmt::format("{}: adjacency must be symmetric binary", to_string(spec.kind)));
}

template <typename Scalar>
Vector<Scalar> bias_or_zero(const OpSpec<Scalar>& spec, Eigen::Index out) {
  if (spec.b.size() == 0) return Vector<Scalar>::Zero(out);
  require(spec.b.size() == out, fmt::format("{}: bias length {} does not match output size {}", to_string(spec.kind),
                                            spec.b.size(), out));
  return spec.b;
}

}  // namespace detail

/// Per-node linear map as one block-diagonal dense layer.
template <typename Scalar>
DenseLayer<Scalar> transform_linear(const OpSpec<Scalar>& spec) {
  detail::require(spec.kind == OpKind::Linear, "transform_linear: kind must be Linear");
  detail::require(spec.n_nodes > 0 && spec.w.size() > 0, "Linear: n_nodes and w required");
  const int n = spec.n_nodes;
  const auto out = spec.w.rows();
  const auto in = spec.w.cols();
  const Vector<Scalar> b = detail::bias_or_zero(spec, out);
  DenseLayer<Scalar> layer;
  layer.weight = Matrix<Scalar>::Zero(n * out, n * in);
  layer.bias.resize(n * out);
  for (int v = 0; v < n; ++v) {
    layer.weight.block(v * out, v * in, out, in) = spec.w;
    layer.bias.segment(v * out, out) = b;
  }
  layer.activation = spec.activation;
  return layer;
}

/// GCNConv on a fixed graph. Coefficient of w for u -> v is
/// A(u,v) / sqrt(d_u d_v) with d_v = 1 + |N(v)|; the self term always uses
/// 1 / d_v.
template <typename Scalar>
GnnLayer<Scalar> transform_gcn_fixed(const OpSpec<Scalar>& spec) {
  detail::require(spec.kind == OpKind::GCNConv, "transform_gcn_fixed: kind must be GCNConv");
  detail::require_supported(spec);
  detail::require_fixed_adjacency(spec);
  const int n = spec.n_nodes;
  const auto& a = spec.adjacency;
  auto layer = GnnLayer<Scalar>::zeros(n, static_cast<int>(spec.w.cols()), static_cast<int>(spec.w.rows()),
                                       GraphMode::Fixed);
  layer.adjacency = a;
  std::vector<Scalar> dhat(n, Scalar(1));
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (u != v && a(u, v)) dhat[v] += Scalar(1);
  using std::sqrt;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v)
        layer.weight(u, v) = spec.w / dhat[v];
      else if (a(u, v))
        layer.weight(u, v) = spec.w / sqrt(dhat[u] * dhat[v]);
    }
  const Vector<Scalar> b = detail::bias_or_zero(spec, spec.w.rows());
  for (int v = 0; v < n; ++v) layer.biases[v] = b;
  layer.activation = spec.activation;
  return layer;
}

/// SAGEConv with sum aggregation: w_{v->v} = w, w_{u->v} = w_neighbor.
template <typename Scalar>
GnnLayer<Scalar> transform_sage(const OpSpec<Scalar>& spec) {
  detail::require(spec.kind == OpKind::SAGEConvSum, "transform_sage: kind must be SAGEConvSum");
  detail::require(spec.w.rows() == spec.w_neighbor.rows() && spec.w.cols() == spec.w_neighbor.cols(),
                  "SAGEConvSum: self and neighbour weights must have the same shape");
  const int n = spec.n_nodes;
  auto layer = GnnLayer<Scalar>::zeros(n, static_cast<int>(spec.w.cols()), static_cast<int>(spec.w.rows()),
                                       spec.graph_mode);
  if (spec.graph_mode == GraphMode::Fixed) {
    detail::require_fixed_adjacency(spec);
    layer.adjacency = spec.adjacency;
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) layer.weight(u, v) = (u == v) ? spec.w : spec.w_neighbor;
  const Vector<Scalar> b = detail::bias_or_zero(spec, spec.w.rows());
  for (int v = 0; v < n; ++v) layer.biases[v] = b;
  layer.activation = spec.activation;
  return layer;
}

/// Parameter-free neighbour aggregation (self excluded). Mean divides by the
/// fixed neighbour count and is rejected on non-fixed graphs.
template <typename Scalar>
GnnLayer<Scalar> transform_aggregation(const OpSpec<Scalar>& spec) {
  detail::require(spec.kind == OpKind::MeanAggregation || spec.kind == OpKind::SumAggregation,
                  "transform_aggregation: kind must be MeanAggregation or SumAggregation");
  detail::require_supported(spec);
  detail::require(spec.n_nodes > 0 && spec.features > 0, "aggregation: n_nodes and features required");
  const int n = spec.n_nodes;
  const int f = spec.features;
  auto layer = GnnLayer<Scalar>::zeros(n, f, f, spec.graph_mode);
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(f, f);
  if (spec.graph_mode == GraphMode::Fixed) {
    detail::require_fixed_adjacency(spec);
    layer.adjacency = spec.adjacency;
    for (int v = 0; v < n; ++v) {
      int deg = 0;
      for (int u = 0; u < n; ++u)
        if (u != v && spec.adjacency(u, v)) ++deg;
      const Scalar scale = (spec.kind == OpKind::MeanAggregation && deg > 0) ? Scalar(1) / Scalar(deg) : Scalar(1);
      for (int u = 0; u < n; ++u)
        if (u != v && spec.adjacency(u, v)) layer.weight(u, v) = eye * scale;
    }
  } else {
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v) layer.weight(u, v) = eye;
  }
  layer.activation = spec.activation;
  return layer;
}

/// Global pooling as an F x (N F) dense layer; mean uses 1/N for every node.
template <typename Scalar>
DenseLayer<Scalar> transform_pool(const OpSpec<Scalar>& spec, int n_nodes, int features) {
  detail::require(spec.kind == OpKind::GlobalMeanPool || spec.kind == OpKind::GlobalAddPool,
                  "transform_pool: kind must be GlobalMeanPool or GlobalAddPool");
  detail::require(n_nodes > 0 && features > 0, "pool: n_nodes and features must be positive");
  const Scalar coeff = spec.kind == OpKind::GlobalMeanPool ? Scalar(1) / Scalar(n_nodes) : Scalar(1);
  DenseLayer<Scalar> layer;
  layer.weight = Matrix<Scalar>::Zero(features, n_nodes * features);
  for (int f = 0; f < features; ++f)
    for (int v = 0; v < n_nodes; ++v) layer.weight(f, v * features + f) = coeff;
  layer.bias = Vector<Scalar>::Zero(features);
  layer.activation = spec.activation;
  return layer;
}

/// Dispatches on spec.kind after checking the support table.
template <typename Scalar>
Layer<Scalar> transform(const OpSpec<Scalar>& spec) {
  detail::require_supported(spec);
  switch (spec.kind) {
    case OpKind::Linear: return transform_linear(spec);
    case OpKind::GCNConv: return transform_gcn_fixed(spec);
    case OpKind::SAGEConvSum: return transform_sage(spec);
    case OpKind::MeanAggregation:
    case OpKind::SumAggregation: return transform_aggregation(spec);
    case OpKind::GlobalMeanPool:
    case OpKind::GlobalAddPool: return transform_pool(spec, spec.n_nodes, spec.features);
  }
  throw UnsupportedOperation("unknown operation kind");
}

}  // namespace molmip
