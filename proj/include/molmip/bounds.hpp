#pragma once

#include <cstdint>
#include <vector>

#include "molmip/gnn.hpp"

namespace molmip {

struct IntervalBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  IntervalBox() = default;
  IntervalBox(Eigen::VectorXd lo, Eigen::VectorXd hi);

  static IntervalBox constant(Eigen::Index size, double lo, double hi);

  Eigen::Index size() const { return lower.size(); }
  bool contains(const Eigen::VectorXd& x) const;
  bool contains(const IntervalBox& other) const;
  /// Sub-box of node v when the box is node-major with `features` per node.
  IntervalBox node(int v, int features) const;
  void validate() const;
};

/// Stacks per-node boxes into one node-major box.
IntervalBox stack_nodes(const std::vector<IntervalBox>& per_node);

enum class Fix : std::uint8_t { Zero, One, Free };

/// Symmetric N x N matrix of adjacency fixings (diagonal = node existence).
class AdjacencyFixing {
 public:
  AdjacencyFixing() = default;
  explicit AdjacencyFixing(int n, Fix fill = Fix::Free);

  static AdjacencyFixing from_adjacency(const Adjacency& a);

  int size() const { return n_; }
  Fix operator()(int u, int v) const { return entries_[static_cast<std::size_t>(u) * n_ + v]; }
  /// Sets (u,v) and (v,u).
  void set(int u, int v, Fix f);
  bool admits(const Adjacency& a) const;
  /// True when every entry fixed here is fixed to the same value in `other`.
  bool is_refined_by(const AdjacencyFixing& other) const;

 private:
  int n_ = 0;
  std::vector<Fix> entries_;
};

/// The z_{u->v} bound rule: Zero -> [0,0], One -> [L,U],
/// Free -> [min(0,L), max(0,U)].
std::pair<double, double> gated_bounds(Fix fix, double lo, double hi);

struct LayerBounds {
  IntervalBox pre;
  IntervalBox post;
  /// Node count of the layer output (N for GNN layers, 1 for flat layers).
  int nodes = 1;
  int features = 0;

  IntervalBox pre_node(int v) const { return pre.node(v, features); }
  IntervalBox post_node(int v) const { return post.node(v, features); }
};

IntervalBox activation_bounds(Activation a, const IntervalBox& pre);

/// Interval propagation through every layer. `input` is node-major over the
/// network input. Fixed-graph layers use their own adjacency. Throws
/// InvariantError on non-finite or inverted input bounds.
std::vector<LayerBounds> propagate(const GnnNetworkd& net, const IntervalBox& input, const AdjacencyFixing& fixing);

}  // namespace molmip
