#pragma once

// Big-M mixed-integer encoding of GNNs.
//
// For every GNN layer l and ordered node pair (u, v) whose adjacency entry is
// free, z[l][u][v][f] = A(u,v) * x[l-1][u][f] is linearised with the four rows
//
//   z - x - U A >= -U        z - x - L A <= -L
//   z - L A     >= 0         z - U A     <= 0
//
// where [L, U] bounds x[l-1][u][f]. Pairs fixed to 1 use x directly and pairs
// fixed to 0 contribute nothing. All big-M constants come from bounds::propagate.

#include <map>
#include <tuple>
#include <vector>

#include "molmip/bounds.hpp"
#include "molmip/gnn.hpp"
#include "molmip/mip_model.hpp"

namespace molmip {

struct VariableMap {
  int n_nodes = 0;
  /// x[0] are the input features X[v][f]; x[l] the post-activation outputs of
  /// layer l, node-major. Entries are variable ids.
  std::vector<std::vector<int>> x;
  /// Pre-activation variables (-1 where the layer has identity activation).
  std::vector<std::vector<int>> pre;
  /// Features per node of x[l] (flat layers count as one node).
  std::vector<int> features;
  std::map<std::tuple<int, int, int, int>, int> z;     // (l, u, v, f)
  std::map<std::tuple<int, int, int>, int> relu;        // (l, index, 0)
  /// N x N, symmetric aliases: a[u*N+v] == a[v*N+u].
  std::vector<int> a;
  /// Bond-order variables created by the molecular constraints; -1 on the
  /// diagonal or when absent.
  std::vector<int> db;
  std::vector<int> tb;
  std::vector<int> out;

  int a_var(int u, int v) const { return a[static_cast<std::size_t>(u) * n_nodes + v]; }
  int x_var(int layer, int v, int f) const { return x[layer][static_cast<std::size_t>(v) * features[layer] + f]; }
  int input_var(int v, int f) const { return x_var(0, v, f); }
  int db_var(int u, int v) const { return db.empty() ? -1 : db[static_cast<std::size_t>(u) * n_nodes + v]; }
  int tb_var(int u, int v) const { return tb.empty() ? -1 : tb[static_cast<std::size_t>(u) * n_nodes + v]; }
};

struct ReluBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Encodes post = max(0, pre). Stably inactive (U <= 0) fixes post to 0,
/// stably active (L >= 0) adds post = pre, otherwise adds a binary indicator
/// and the rows post >= pre, post <= pre - L(1 - s), post <= U s. Returns the
/// indicator id or -1.
int encode_relu(MipModel& model, int pre_var, int post_var, ReluBounds bounds, const std::string& indicator_name);

/// Encodes layer `layer_index` (1-based) reading map.x[layer_index - 1].
void encode_gnn_layer(MipModel& model, const GnnLayerd& layer, int layer_index, const IntervalBox& input_box,
                      const LayerBounds& bounds, const AdjacencyFixing& fixing, VariableMap& map, bool is_output);

void encode_dense_layer(MipModel& model, const DenseLayerd& layer, int layer_index, const LayerBounds& bounds,
                        VariableMap& map, bool is_output);

enum class InputIntegrality { Binary, Continuous };

struct EncodeOptions {
  InputIntegrality input_integrality = InputIntegrality::Binary;
  /// Defaults to [0,1] for every input feature when empty.
  IntervalBox input_box;
};

struct EncodedNetwork {
  MipModel model;
  VariableMap map;
  std::vector<LayerBounds> bounds;
};

/// Builds adjacency variables A[u][v] (u <= v, fixed per `fixing`), input
/// variables X[v][f], and every layer; outputs are named out[i]. Throws
/// UnsupportedOperation for activations other than identity / ReLU.
EncodedNetwork encode_network(const GnnNetworkd& net, const AdjacencyFixing& fixing, const EncodeOptions& options = {});

/// Adds the layers of `net` to an existing model whose map already holds the
/// adjacency and input variables.
std::vector<LayerBounds> encode_layers(MipModel& model, VariableMap& map, const GnnNetworkd& net,
                                       const AdjacencyFixing& fixing, const IntervalBox& input_box);

/// Writes the values forward() produces for `assign` into the adjacency,
/// input, layer, z and ReLU-indicator entries of `point` (sized to the model).
void lift_network_point(std::vector<double>& point, const VariableMap& map, const GnnNetworkd& net,
                        const Assignment& assign);

/// maximize out[1] - out[0]. Throws DimensionError unless there are exactly
/// two outputs.
void set_objective_logit_margin(MipModel& model, const VariableMap& map);

/// Closed-form size of the network part of an encoding (see docs/formats.md).
struct EncodingSize {
  long long variables = 0;
  long long binaries = 0;
  long long constraints = 0;
};
EncodingSize network_encoding_size(const GnnNetworkd& net, const AdjacencyFixing& fixing,
                                   const std::vector<LayerBounds>& bounds);

}  // namespace molmip
