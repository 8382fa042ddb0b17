#include "molmip/encode.hpp"

#include <fmt/format.h>

namespace molmip {

namespace {

std::string node_index(int nodes, int features, int i) {
  if (nodes == 1) return fmt::format("[{}]", i);
  return fmt::format("[{}][{}]", i / features, i % features);
}

void check_activation(Activation a, int layer_index) {
  if (!is_piecewise_linear(a))
    throw UnsupportedOperation(
        fmt::format("layer {}: activation '{}' has no linear encoding", layer_index - 1, to_string(a)));
}

/// Creates the post-activation (and pre-activation) variables for output i
/// and ties them to `affine` = pre.
void encode_output(MipModel& model, VariableMap& map, int layer_index, int nodes, int features, int i,
                   Activation activation, const LayerBounds& bounds, LinearExpr affine, bool is_output) {
  const std::string idx = node_index(nodes, features, i);
  const std::string post_name = is_output ? fmt::format("out[{}]", i) : fmt::format("x[{}]{}", layer_index, idx);
  const double lo = bounds.pre.lower(i);
  const double hi = bounds.pre.upper(i);
  if (activation == Activation::Identity) {
    const int post = model.add_variable(post_name, lo, hi);
    affine.add(post, -1.0);
    model.add_constraint(fmt::format("aff[{}]{}", layer_index, idx), affine, Sense::Equal, 0.0);
    map.x[layer_index][i] = post;
    return;
  }
  const int pre = model.add_variable(fmt::format("pre[{}]{}", layer_index, idx), lo, hi);
  affine.add(pre, -1.0);
  model.add_constraint(fmt::format("aff[{}]{}", layer_index, idx), affine, Sense::Equal, 0.0);
  const int post = model.add_variable(post_name, std::max(0.0, lo), std::max(0.0, hi));
  const int ind = encode_relu(model, pre, post, {lo, hi}, fmt::format("relu[{}]{}", layer_index, idx));
  if (ind >= 0) map.relu[{layer_index, i, 0}] = ind;
  map.pre[layer_index][i] = pre;
  map.x[layer_index][i] = post;
}

void open_layer(VariableMap& map, int layer_index, int size, int features) {
  if (static_cast<int>(map.x.size()) != layer_index)
    throw InvariantError(fmt::format("encode: layer {} encoded out of order", layer_index - 1));
  map.x.emplace_back(static_cast<std::size_t>(size), -1);
  map.pre.emplace_back(static_cast<std::size_t>(size), -1);
  map.features.push_back(features);
}

}  // namespace

int encode_relu(MipModel& model, int pre_var, int post_var, ReluBounds bounds, const std::string& indicator_name) {
  const double lo = bounds.lower;
  const double hi = bounds.upper;
  if (hi <= 0.0) {
    model.set_bounds(post_var, 0.0, 0.0);
    return -1;
  }
  const std::string base = indicator_name.substr(indicator_name.find('['));
  if (lo >= 0.0) {
    model.add_constraint("relu_eq" + base, {{post_var, 1.0}, {pre_var, -1.0}}, Sense::Equal, 0.0);
    return -1;
  }
  const int s = model.add_binary(indicator_name);
  model.add_constraint("relu_ge" + base, {{post_var, 1.0}, {pre_var, -1.0}}, Sense::GreaterEqual, 0.0);
  // post <= pre - L (1 - s)
  model.add_constraint("relu_lo" + base, {{post_var, 1.0}, {pre_var, -1.0}, {s, -lo}}, Sense::LessEqual, -lo);
  // post <= U s
  model.add_constraint("relu_up" + base, {{post_var, 1.0}, {s, -hi}}, Sense::LessEqual, 0.0);
  return s;
}

void encode_gnn_layer(MipModel& model, const GnnLayerd& layer, int layer_index, const IntervalBox& input_box,
                      const LayerBounds& bounds, const AdjacencyFixing& fixing, VariableMap& map, bool is_output) {
  check_activation(layer.activation, layer_index);
  const int n = layer.n_nodes;
  const int fin = layer.in_features;
  const int fout = layer.out_features;
  const std::vector<int> input = map.x.at(static_cast<std::size_t>(layer_index - 1));
  if (static_cast<int>(input.size()) != n * fin || input_box.size() != n * fin)
    throw DimensionError(fmt::format("layer {}: input has {} variables, expected {}", layer_index - 1, input.size(), n * fin));
  input_box.validate();
  open_layer(map, layer_index, n * fout, fout);

  // Contribution variable for (u -> v, f): x itself, a fresh z, or nothing.
  std::vector<int> contrib(static_cast<std::size_t>(n) * n * fin, -1);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      const Fix fix = layer.graph_mode == GraphMode::Fixed ? (layer.adjacency(u, v) ? Fix::One : Fix::Zero)
                                                            : fixing(u, v);
      if (fix == Fix::Zero) continue;
      for (int f = 0; f < fin; ++f) {
        const std::size_t slot = (static_cast<std::size_t>(u) * n + v) * fin + f;
        const int xu = input[static_cast<std::size_t>(u) * fin + f];
        if (fix == Fix::One) {
          contrib[slot] = xu;
          continue;
        }
        const double lo = input_box.lower(u * fin + f);
        const double hi = input_box.upper(u * fin + f);
        const auto [zl, zu] = gated_bounds(Fix::Free, lo, hi);
        const std::string idx = fmt::format("[{}][{}][{}][{}]", layer_index, u, v, f);
        const int z = model.add_variable("z" + idx, zl, zu);
        const int a = map.a_var(u, v);
        model.add_constraint("bigm_x_lo" + idx, {{z, 1.0}, {xu, -1.0}, {a, -hi}}, Sense::GreaterEqual, -hi);
        model.add_constraint("bigm_x_up" + idx, {{z, 1.0}, {xu, -1.0}, {a, -lo}}, Sense::LessEqual, -lo);
        model.add_constraint("bigm_a_lo" + idx, {{z, 1.0}, {a, -lo}}, Sense::GreaterEqual, 0.0);
        model.add_constraint("bigm_a_up" + idx, {{z, 1.0}, {a, -hi}}, Sense::LessEqual, 0.0);
        map.z[{layer_index, u, v, f}] = z;
        contrib[slot] = z;
      }
    }

  for (int v = 0; v < n; ++v)
    for (int k = 0; k < fout; ++k) {
      LinearExpr affine;
      affine.add_constant(layer.biases[v](k));
      for (int u = 0; u < n; ++u) {
        const auto& w = layer.weight(u, v);
        for (int f = 0; f < fin; ++f) {
          const int c = contrib[(static_cast<std::size_t>(u) * n + v) * fin + f];
          if (c >= 0) affine.add(c, w(k, f));
        }
      }
      encode_output(model, map, layer_index, n, fout, v * fout + k, layer.activation, bounds, std::move(affine),
                    is_output);
    }
}

void encode_dense_layer(MipModel& model, const DenseLayerd& layer, int layer_index, const LayerBounds& bounds,
                        VariableMap& map, bool is_output) {
  check_activation(layer.activation, layer_index);
  const std::vector<int> input = map.x.at(static_cast<std::size_t>(layer_index - 1));
  if (static_cast<int>(input.size()) != layer.input_size())
    throw DimensionError(fmt::format("layer {}: input has {} variables, expected {}", layer_index - 1, input.size(),
                                     layer.input_size()));
  const int out = layer.output_size();
  open_layer(map, layer_index, out, out);
  for (int i = 0; i < out; ++i) {
    LinearExpr affine;
    affine.add_constant(layer.bias(i));
    for (int j = 0; j < layer.input_size(); ++j) affine.add(input[static_cast<std::size_t>(j)], layer.weight(i, j));
    encode_output(model, map, layer_index, 1, out, i, layer.activation, bounds, std::move(affine), is_output);
  }
}

std::vector<LayerBounds> encode_layers(MipModel& model, VariableMap& map, const GnnNetworkd& net,
                                       const AdjacencyFixing& fixing, const IntervalBox& input_box) {
  net.validate();
  for (std::size_t i = 0; i < net.layers.size(); ++i)
    check_activation(std::visit([](const auto& l) { return l.activation; }, net.layers[i]), static_cast<int>(i) + 1);
  auto bounds = propagate(net, input_box, fixing);
  IntervalBox box = input_box;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const int l = static_cast<int>(i) + 1;
    const bool last = i + 1 == net.layers.size();
    if (const auto* g = std::get_if<GnnLayerd>(&net.layers[i]))
      encode_gnn_layer(model, *g, l, box, bounds[i], fixing, map, last);
    else
      encode_dense_layer(model, std::get<DenseLayerd>(net.layers[i]), l, bounds[i], map, last);
    box = bounds[i].post;
  }
  map.out = map.x.back();
  return bounds;
}

EncodedNetwork encode_network(const GnnNetworkd& net, const AdjacencyFixing& fixing, const EncodeOptions& options) {
  net.validate();
  const int n = net.n_nodes;
  const int d0 = net.input_features;
  if (fixing.size() != n) throw DimensionError(fmt::format("adjacency fixing must be {}x{}", n, n));
  IntervalBox box = options.input_box.size() > 0 ? options.input_box : IntervalBox::constant(n * d0, 0.0, 1.0);
  if (box.size() != n * d0) throw DimensionError("input box size does not match the network input");

  EncodedNetwork enc;
  enc.map.n_nodes = n;
  enc.map.a.assign(static_cast<std::size_t>(n) * n, -1);
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v) {
      const Fix f = fixing(u, v);
      const double lo = f == Fix::One ? 1.0 : 0.0;
      const double hi = f == Fix::Zero ? 0.0 : 1.0;
      const int id = enc.model.add_variable(fmt::format("A[{}][{}]", u, v), lo, hi, VarType::Binary);
      enc.map.a[static_cast<std::size_t>(u) * n + v] = id;
      enc.map.a[static_cast<std::size_t>(v) * n + u] = id;
    }
  enc.map.x.emplace_back();
  enc.map.pre.emplace_back(static_cast<std::size_t>(n) * d0, -1);
  enc.map.features.push_back(d0);
  const bool binary = options.input_integrality == InputIntegrality::Binary;
  for (int v = 0; v < n; ++v)
    for (int f = 0; f < d0; ++f) {
      const double lo = box.lower(v * d0 + f);
      const double hi = box.upper(v * d0 + f);
      if (binary && (lo < 0.0 || hi > 1.0)) throw InvariantError("binary inputs need bounds inside [0,1]");
      enc.map.x[0].push_back(enc.model.add_variable(fmt::format("X[{}][{}]", v, f), lo, hi,
                                                    binary ? VarType::Binary : VarType::Continuous));
    }
  enc.bounds = encode_layers(enc.model, enc.map, net, fixing, box);
  return enc;
}

void lift_network_point(std::vector<double>& point, const VariableMap& map, const GnnNetworkd& net,
                        const Assignment& assign) {
  const int n = net.n_nodes;
  const auto trace = forward_trace(net, assign);
  auto put = [&](int var, double value) {
    if (var >= 0) point.at(static_cast<std::size_t>(var)) = value;
  };
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v) put(map.a_var(u, v), assign.adjacency(u, v));
  const Eigen::VectorXd input = assign.flat_features();
  for (Eigen::Index i = 0; i < input.size(); ++i) put(map.x[0][static_cast<std::size_t>(i)], input(i));
  Eigen::VectorXd state = input;
  for (std::size_t l = 0; l < trace.size(); ++l) {
    const int layer = static_cast<int>(l) + 1;
    for (Eigen::Index i = 0; i < trace[l].post.size(); ++i) {
      put(map.x[layer][static_cast<std::size_t>(i)], trace[l].post(i));
      put(map.pre[layer][static_cast<std::size_t>(i)], trace[l].pre(i));
      if (auto it = map.relu.find({layer, static_cast<int>(i), 0}); it != map.relu.end())
        put(it->second, trace[l].pre(i) > 0.0 ? 1.0 : 0.0);
    }
    if (const auto* g = std::get_if<GnnLayerd>(&net.layers[l]))
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          for (int f = 0; f < g->in_features; ++f)
            if (auto it = map.z.find({layer, u, v, f}); it != map.z.end())
              put(it->second, assign.adjacency(u, v) ? state(u * g->in_features + f) : 0.0);
    state = trace[l].post;
  }
}

void set_objective_logit_margin(MipModel& model, const VariableMap& map) {
  if (map.out.size() != 2)
    throw DimensionError(fmt::format("logit margin objective needs 2 outputs, network has {}", map.out.size()));
  model.set_objective(ObjSense::Maximize, {{map.out[1], 1.0}, {map.out[0], -1.0}});
}

EncodingSize network_encoding_size(const GnnNetworkd& net, const AdjacencyFixing& fixing,
                                   const std::vector<LayerBounds>& bounds) {
  const long long n = net.n_nodes;
  EncodingSize s;
  s.variables = n * (n + 1) / 2 + n * net.input_features;
  s.binaries = s.variables;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    long long outputs = 0;
    Activation act = Activation::Identity;
    if (const auto* g = std::get_if<GnnLayerd>(&net.layers[i])) {
      long long free_pairs = 0;
      if (g->graph_mode == GraphMode::NonFixed)
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) free_pairs += fixing(u, v) == Fix::Free;
      s.variables += free_pairs * g->in_features;
      s.constraints += 4 * free_pairs * g->in_features;
      outputs = n * g->out_features;
      act = g->activation;
    } else {
      const auto& d = std::get<DenseLayerd>(net.layers[i]);
      outputs = d.output_size();
      act = d.activation;
    }
    s.variables += outputs;
    s.constraints += outputs;
    if (act == Activation::ReLU) {
      s.variables += outputs;
      for (Eigen::Index k = 0; k < bounds[i].pre.size(); ++k) {
        const double lo = bounds[i].pre.lower(k);
        const double hi = bounds[i].pre.upper(k);
        if (hi <= 0.0) continue;
        if (lo >= 0.0) {
          s.constraints += 1;
        } else {
          s.variables += 1;
          s.binaries += 1;
          s.constraints += 3;
        }
      }
    }
  }
  return s;
}

}  // namespace molmip
