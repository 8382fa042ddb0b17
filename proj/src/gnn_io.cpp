#include "molmip/gnn_io.hpp"

#include <fstream>

#include "molmip/transforms.hpp"

namespace molmip {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(fmt::format("{}: missing field '{}'", where, key));
  return *it;
}

int positive_int(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw ParseError(fmt::format("{}: '{}' must be a positive integer", where, key));
  return v.get<int>();
}

Vector<double> parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(fmt::format("{}: expected an array of numbers", where));
  Vector<double> v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(fmt::format("{}[{}]: expected a number", where, i));
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix<double> parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(fmt::format("{}: expected an array of rows", where));
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = rows > 0 && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix<double> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector<double> row = parse_vector(j[r], fmt::format("{}[{}]", where, r));
    if (row.size() != cols) throw InvariantError(fmt::format("{}: ragged matrix at row {}", where, r));
    m.row(r) = row.transpose();
  }
  return m;
}

Adjacency parse_adjacency(const json& j, const std::string& where) {
  const Matrix<double> m = parse_matrix(j, where);
  Adjacency a(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) != 0.0 && m(r, c) != 1.0)
        throw InvariantError(fmt::format("{}: entries must be 0 or 1", where));
      a(r, c) = static_cast<std::uint8_t>(m(r, c));
    }
  return a;
}

GraphMode parse_mode(const json& layer) {
  auto it = layer.find("graph_mode");
  if (it == layer.end()) return GraphMode::NonFixed;
  const auto s = it->get<std::string>();
  if (s == "fixed") return GraphMode::Fixed;
  if (s == "non_fixed" || s == "nonfixed") return GraphMode::NonFixed;
  throw ParseError("unknown graph_mode '" + s + "'");
}

Activation parse_activation(const json& layer) {
  auto it = layer.find("activation");
  return it == layer.end() ? Activation::Identity : activation_from_string(it->get<std::string>());
}

void check_declared_sizes(const json& layer, int in, int out, const std::string& where) {
  if (auto it = layer.find("in_features"); it != layer.end() && it->get<int>() != in)
    throw InvariantError(fmt::format("{}: in_features {} does not match weights ({})", where, it->get<int>(), in));
  if (auto it = layer.find("out_features"); it != layer.end() && it->get<int>() != out)
    throw InvariantError(fmt::format("{}: out_features {} does not match weights ({})", where, it->get<int>(), out));
}

GnnLayerd parse_gnn_layer(const json& layer, int n, const std::string& where) {
  GnnLayerd g;
  g.n_nodes = n;
  g.in_features = positive_int(layer, "in_features", where);
  g.out_features = positive_int(layer, "out_features", where);
  g.activation = parse_activation(layer);
  g.graph_mode = parse_mode(layer);
  const json& w = field(layer, "weights", where);
  if (!w.is_array() || w.size() != static_cast<std::size_t>(n))
    throw InvariantError(fmt::format("{}: weights: expected {} rows of node pairs", where, n));
  g.weights.reserve(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u) {
    if (!w[u].is_array() || w[u].size() != static_cast<std::size_t>(n))
      throw InvariantError(fmt::format("{}: weights[{}]: expected {} matrices", where, u, n));
    for (int v = 0; v < n; ++v) g.weights.push_back(parse_matrix(w[u][v], fmt::format("{}: weights[{}][{}]", where, u, v)));
  }
  const json& b = field(layer, "biases", where);
  if (!b.is_array()) throw ParseError(fmt::format("{}: biases: expected an array", where));
  for (std::size_t v = 0; v < b.size(); ++v) g.biases.push_back(parse_vector(b[v], fmt::format("{}: biases[{}]", where, v)));
  if (g.graph_mode == GraphMode::Fixed) g.adjacency = parse_adjacency(field(layer, "adjacency", where), where + ": adjacency");
  g.validate(where);
  return g;
}

DenseLayerd parse_dense_layer(const json& layer, const std::string& where) {
  DenseLayerd d;
  d.activation = parse_activation(layer);
  d.weight = parse_matrix(field(layer, "weights", where), where + ": weights");
  d.bias = parse_vector(field(layer, "biases", where), where + ": biases");
  d.validate(where);
  check_declared_sizes(layer, d.input_size(), d.output_size(), where);
  return d;
}

Layerd parse_op_layer(const json& layer, OpKind kind, int n, int current_size, const std::string& where) {
  OpSpec<double> spec;
  spec.kind = kind;
  spec.n_nodes = n;
  spec.graph_mode = parse_mode(layer);
  spec.activation = parse_activation(layer);
  spec.features = current_size / n;
  if (spec.graph_mode == GraphMode::Fixed)
    spec.adjacency = parse_adjacency(field(layer, "adjacency", where), where + ": adjacency");
  if (auto it = layer.find("w"); it != layer.end()) spec.w = parse_matrix(*it, where + ": w");
  if (auto it = layer.find("w_neighbor"); it != layer.end()) spec.w_neighbor = parse_matrix(*it, where + ": w_neighbor");
  if (auto it = layer.find("b"); it != layer.end()) spec.b = parse_vector(*it, where + ": b");
  try {
    return transform(spec);
  } catch (const InvariantError& e) {
    throw InvariantError(fmt::format("{}: {}", where, e.what()));
  }
}

json matrix_to_json(const Matrix<double>& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector<double>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

GnnNetworkd network_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("network: expected an object");
  GnnNetworkd net;
  net.n_nodes = positive_int(doc, "n_nodes", "network");
  const json& layers = field(doc, "layers", "network");
  if (!layers.is_array() || layers.empty()) throw ParseError("network: 'layers' must be a non-empty array");
  if (auto it = doc.find("input_features"); it != doc.end()) {
    net.input_features = it->get<int>();
  } else {
    const json& first = layers[0];
    if (auto in = first.find("in_features"); in != first.end())
      net.input_features = in->get<int>() / (first.value("kind", "gnn") == "dense" ? net.n_nodes : 1);
    else if (auto w = first.find("w"); w != first.end() && w->is_array() && !w->empty())
      net.input_features = static_cast<int>((*w)[0].size());
    else
      throw ParseError("network: cannot infer input_features");
  }
  int size = net.n_nodes * net.input_features;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string where = fmt::format("layer {}", i);
    const json& layer = layers[i];
    const std::string kind = field(layer, "kind", where).get<std::string>();
    Layerd parsed = [&]() -> Layerd {
      if (kind == "gnn") return parse_gnn_layer(layer, net.n_nodes, where);
      if (kind == "dense") return parse_dense_layer(layer, where);
      return parse_op_layer(layer, op_kind_from_string(kind), net.n_nodes, size, where);
    }();
    size = std::visit([](const auto& l) { return l.output_size(); }, parsed);
    net.layers.push_back(std::move(parsed));
  }
  net.validate();
  return net;
}

GnnNetworkd load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
  try {
    return network_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

json network_to_json(const GnnNetworkd& net) {
  json doc;
  doc["n_nodes"] = net.n_nodes;
  doc["input_features"] = net.input_features;
  json layers = json::array();
  for (const auto& l : net.layers) {
    json out;
    if (const auto* g = std::get_if<GnnLayerd>(&l)) {
      out["kind"] = "gnn";
      out["activation"] = to_string(g->activation);
      out["in_features"] = g->in_features;
      out["out_features"] = g->out_features;
      out["graph_mode"] = g->graph_mode == GraphMode::Fixed ? "fixed" : "non_fixed";
      json grid = json::array();
      for (int u = 0; u < g->n_nodes; ++u) {
        json row = json::array();
        for (int v = 0; v < g->n_nodes; ++v) row.push_back(matrix_to_json(g->weight(u, v)));
        grid.push_back(std::move(row));
      }
      out["weights"] = std::move(grid);
      json biases = json::array();
      for (const auto& b : g->biases) biases.push_back(vector_to_json(b));
      out["biases"] = std::move(biases);
      if (g->graph_mode == GraphMode::Fixed) out["adjacency"] = matrix_to_json(g->adjacency.cast<double>());
    } else {
      const auto& d = std::get<DenseLayerd>(l);
      out["kind"] = "dense";
      out["activation"] = to_string(d.activation);
      out["in_features"] = d.input_size();
      out["out_features"] = d.output_size();
      out["weights"] = matrix_to_json(d.weight);
      out["biases"] = vector_to_json(d.bias);
    }
    layers.push_back(std::move(out));
  }
  doc["layers"] = std::move(layers);
  return doc;
}

void save_network(const GnnNetworkd& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write network file " + path.string());
  out << network_to_json(net).dump(1) << '\n';
}

}  // namespace molmip
