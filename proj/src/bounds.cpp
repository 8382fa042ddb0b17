#include "molmip/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace molmip {

IntervalBox::IntervalBox(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw DimensionError("interval box: lower/upper size mismatch");
}

IntervalBox IntervalBox::constant(Eigen::Index size, double lo, double hi) {
  return {Eigen::VectorXd::Constant(size, lo), Eigen::VectorXd::Constant(size, hi)};
}

bool IntervalBox::contains(const Eigen::VectorXd& x) const {
  if (x.size() != size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

bool IntervalBox::contains(const IntervalBox& other) const {
  if (other.size() != size()) return false;
  return (other.lower.array() >= lower.array()).all() && (other.upper.array() <= upper.array()).all();
}

IntervalBox IntervalBox::node(int v, int features) const {
  return {lower.segment(v * features, features), upper.segment(v * features, features)};
}

void IntervalBox::validate() const {
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (!std::isfinite(lower(i)) || !std::isfinite(upper(i)))
      throw InvariantError(fmt::format("interval box: entry {} is not finite", i));
    if (lower(i) > upper(i)) throw InvariantError(fmt::format("interval box: entry {} has lower > upper", i));
  }
}

IntervalBox stack_nodes(const std::vector<IntervalBox>& per_node) {
  Eigen::Index total = 0;
  for (const auto& b : per_node) total += b.size();
  IntervalBox out = IntervalBox::constant(total, 0.0, 0.0);
  Eigen::Index at = 0;
  for (const auto& b : per_node) {
    out.lower.segment(at, b.size()) = b.lower;
    out.upper.segment(at, b.size()) = b.upper;
    at += b.size();
  }
  return out;
}

AdjacencyFixing::AdjacencyFixing(int n, Fix fill) : n_(n), entries_(static_cast<std::size_t>(n) * n, fill) {}

AdjacencyFixing AdjacencyFixing::from_adjacency(const Adjacency& a) {
  AdjacencyFixing f(static_cast<int>(a.rows()));
  for (int u = 0; u < f.n_; ++u)
    for (int v = 0; v < f.n_; ++v) f.entries_[static_cast<std::size_t>(u) * f.n_ + v] = a(u, v) ? Fix::One : Fix::Zero;
  return f;
}

void AdjacencyFixing::set(int u, int v, Fix f) {
  entries_[static_cast<std::size_t>(u) * n_ + v] = f;
  entries_[static_cast<std::size_t>(v) * n_ + u] = f;
}

bool AdjacencyFixing::admits(const Adjacency& a) const {
  if (a.rows() != n_ || a.cols() != n_) return false;
  for (int u = 0; u < n_; ++u)
    for (int v = 0; v < n_; ++v) {
      const Fix f = (*this)(u, v);
      if ((f == Fix::Zero && a(u, v)) || (f == Fix::One && !a(u, v))) return false;
    }
  return true;
}

bool AdjacencyFixing::is_refined_by(const AdjacencyFixing& other) const {
  if (other.n_ != n_) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i] != Fix::Free && entries_[i] != other.entries_[i]) return false;
  return true;
}

std::pair<double, double> gated_bounds(Fix fix, double lo, double hi) {
  switch (fix) {
    case Fix::Zero: return {0.0, 0.0};
    case Fix::One: return {lo, hi};
    case Fix::Free: return {std::min(0.0, lo), std::max(0.0, hi)};
  }
  return {lo, hi};
}

IntervalBox activation_bounds(Activation a, const IntervalBox& pre) {
  IntervalBox out = pre;
  // Every supported activation is monotone non-decreasing.
  for (Eigen::Index i = 0; i < pre.size(); ++i) {
    out.lower(i) = apply_activation(a, pre.lower(i));
    out.upper(i) = apply_activation(a, pre.upper(i));
  }
  return out;
}

namespace {

// Interval sum with an outward pad covering floating-point rounding of any
// evaluation order of the same terms, so forward values are contained exactly.
struct IntervalSum {
  double lo = 0.0;
  double hi = 0.0;
  double magnitude = 0.0;
  int terms = 0;

  explicit IntervalSum(double start) : lo(start), hi(start), magnitude(std::abs(start)), terms(start != 0.0) {}

  void add(double w, double zl, double zu) {
    if (w == 0.0 || (zl == 0.0 && zu == 0.0)) return;
    const double a = w * zl;
    const double b = w * zu;
    lo += std::min(a, b);
    hi += std::max(a, b);
    magnitude += std::max(std::abs(a), std::abs(b));
    ++terms;
  }

  std::pair<double, double> finish() const {
    if (terms <= 1) return {lo, hi};
    const double pad = 2.0 * terms * std::numeric_limits<double>::epsilon() * magnitude;
    return {lo - pad, hi + pad};
  }
};

IntervalBox gnn_pre_bounds(const GnnLayerd& layer, const IntervalBox& in, const AdjacencyFixing& fixing) {
  const int n = layer.n_nodes;
  const int fin = layer.in_features;
  const int fout = layer.out_features;
  IntervalBox pre = IntervalBox::constant(n * fout, 0.0, 0.0);
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < fout; ++k) {
      IntervalSum sum(layer.biases[v](k));
      for (int u = 0; u < n; ++u) {
        const Fix fix = layer.graph_mode == GraphMode::Fixed ? (layer.adjacency(u, v) ? Fix::One : Fix::Zero)
                                                              : fixing(u, v);
        if (fix == Fix::Zero) continue;
        const auto& w = layer.weight(u, v);
        for (int f = 0; f < fin; ++f) {
          const auto [zl, zu] = gated_bounds(fix, in.lower(u * fin + f), in.upper(u * fin + f));
          sum.add(w(k, f), zl, zu);
        }
      }
      std::tie(pre.lower(v * fout + k), pre.upper(v * fout + k)) = sum.finish();
    }
  return pre;
}

IntervalBox dense_pre_bounds(const DenseLayerd& layer, const IntervalBox& in) {
  IntervalBox pre(layer.bias, layer.bias);
  for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
    IntervalSum sum(layer.bias(r));
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) sum.add(layer.weight(r, c), in.lower(c), in.upper(c));
    std::tie(pre.lower(r), pre.upper(r)) = sum.finish();
  }
  return pre;
}

}  // namespace

std::vector<LayerBounds> propagate(const GnnNetworkd& net, const IntervalBox& input, const AdjacencyFixing& fixing) {
  input.validate();
  if (input.size() != net.input_size())
    throw DimensionError(fmt::format("input bounds: expected size {}, got {}", net.input_size(), input.size()));
  if (fixing.size() != net.n_nodes)
    throw DimensionError(fmt::format("adjacency fixing: expected {}x{}", net.n_nodes, net.n_nodes));
  std::vector<LayerBounds> out;
  out.reserve(net.layers.size());
  IntervalBox state = input;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    LayerBounds lb;
    if (const auto* g = std::get_if<GnnLayerd>(&net.layers[i])) {
      lb.pre = gnn_pre_bounds(*g, state, fixing);
      lb.post = activation_bounds(g->activation, lb.pre);
      lb.nodes = g->n_nodes;
      lb.features = g->out_features;
    } else {
      const auto& d = std::get<DenseLayerd>(net.layers[i]);
      lb.pre = dense_pre_bounds(d, state);
      lb.post = activation_bounds(d.activation, lb.pre);
      lb.nodes = 1;
      lb.features = d.output_size();
    }
    state = lb.post;
    out.push_back(std::move(lb));
  }
  return out;
}

}  // namespace molmip
