#include <random>

#include "doctest.h"
#include "molmip/bounds.hpp"
#include "molmip/pipeline.hpp"
#include "molmip/transforms.hpp"

using namespace molmip;

namespace {

GnnNetworkd sage_net(double w1, double w2, double b, Activation act = Activation::Identity) {
  OpSpec<double> s;
  s.kind = OpKind::SAGEConvSum;
  s.n_nodes = 2;
  s.w = Eigen::MatrixXd::Constant(1, 1, w1);
  s.w_neighbor = Eigen::MatrixXd::Constant(1, 1, w2);
  s.b = Eigen::VectorXd::Constant(1, b);
  s.activation = act;
  return {2, 1, {transform_sage(s)}};
}

bool inside(const std::vector<LayerBounds>& bounds, const std::vector<LayerTrace<double>>& trace) {
  for (std::size_t l = 0; l < trace.size(); ++l)
    if (!bounds[l].pre.contains(trace[l].pre) || !bounds[l].post.contains(trace[l].post)) return false;
  return true;
}

bool wider_or_equal(const std::vector<LayerBounds>& wide, const std::vector<LayerBounds>& narrow) {
  for (std::size_t l = 0; l < wide.size(); ++l)
    if (!wide[l].pre.contains(narrow[l].pre) || !wide[l].post.contains(narrow[l].post)) return false;
  return true;
}

}  // namespace

TEST_SUITE("bounds") {
TEST_CASE("zero-weight layer is pinned to its bias") {
  const auto b = propagate(sage_net(0, 0, 0.25), IntervalBox::constant(2, 0, 1), AdjacencyFixing(2));
  CHECK(b[0].post.lower == Eigen::Vector2d(0.25, 0.25));
  CHECK(b[0].post.upper == Eigen::Vector2d(0.25, 0.25));
}

TEST_CASE("identity layer keeps the input box") {
  AdjacencyFixing fix(2);
  fix.set(0, 0, Fix::One);
  fix.set(1, 1, Fix::One);
  const auto b = propagate(sage_net(1, 0, 0), IntervalBox::constant(2, 0, 1), fix);
  CHECK(b[0].post.lower == Eigen::Vector2d(0, 0));
  CHECK(b[0].post.upper == Eigen::Vector2d(1, 1));
}

TEST_CASE("free adjacency, unit weights: pre-activation in [0, 2]") {
  const auto b = propagate(sage_net(1, 1, 0), IntervalBox::constant(2, 0, 1), AdjacencyFixing(2));
  // outward rounding may widen the box by a few ulps
  CHECK((b[0].pre.lower - Eigen::Vector2d(0, 0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((b[0].pre.upper - Eigen::Vector2d(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(b[0].pre.lower.maxCoeff() <= 0.0);
  CHECK(b[0].pre.upper.minCoeff() >= 2.0);
  // every adjacency pattern and corner input reaches into the box, and the extremes are attained
  double lo = 1e9, hi = -1e9;
  for (int mask = 0; mask < 8; ++mask) {
    Adjacency a(2, 2);
    a << (mask & 1), (mask >> 1 & 1), (mask >> 1 & 1), (mask >> 2 & 1);
    for (int corner = 0; corner < 4; ++corner) {
      Assignment as{Eigen::Vector2d(corner & 1, corner >> 1), a};
      const auto pre = forward_trace(sage_net(1, 1, 0), as)[0].pre;
      lo = std::min(lo, pre.minCoeff());
      hi = std::max(hi, pre.maxCoeff());
    }
  }
  CHECK(lo == 0.0);
  CHECK(hi == 2.0);
}

TEST_CASE("gated bound rule") {
  CHECK(gated_bounds(Fix::Zero, -1, 2) == std::pair(0.0, 0.0));
  CHECK(gated_bounds(Fix::One, -1, 2) == std::pair(-1.0, 2.0));
  CHECK(gated_bounds(Fix::Free, 0.5, 2) == std::pair(0.0, 2.0));
  CHECK(gated_bounds(Fix::Free, -3, -1) == std::pair(-3.0, 0.0));
}

TEST_CASE("non-finite input bounds are rejected") {
  IntervalBox box = IntervalBox::constant(2, 0, 1);
  box.upper(1) = kInf;
  CHECK_THROWS_AS(propagate(sage_net(1, 1, 0), box, AdjacencyFixing(2)), InvariantError);
}

TEST_CASE("random assignments stay inside the boxes") {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  for (int seed = 0; seed < 5; ++seed) {
    const GnnNetworkd net = fixture_network(seed, 4, 6);
    AdjacencyFixing fix(4);
    for (int v = 0; v < 4; ++v) fix.set(v, v, Fix::One);
    const auto bounds = propagate(net, IntervalBox::constant(24, 0, 1), fix);
    for (int trial = 0; trial < 200; ++trial) {
      Adjacency a = Adjacency::Identity(4, 4);
      for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) a(u, v) = a(v, u) = coin(rng);
      Assignment as{Eigen::MatrixXd(4, 6), a};
      for (int v = 0; v < 4; ++v)
        for (int f = 0; f < 6; ++f) as.features(v, f) = coin(rng);
      CHECK(inside(bounds, forward_trace(net, as)));
    }
  }
}

TEST_CASE("monotone in the input box and in the fixing") {
  const GnnNetworkd net = fixture_network(3, 3, 2);
  AdjacencyFixing free(3);
  const auto narrow = propagate(net, IntervalBox::constant(6, 0, 1), free);
  const auto wide = propagate(net, IntervalBox::constant(6, -0.5, 1.5), free);
  CHECK(wider_or_equal(wide, narrow));

  AdjacencyFixing fixed = free;
  fixed.set(0, 1, Fix::One);
  fixed.set(1, 2, Fix::Zero);
  fixed.set(0, 0, Fix::One);
  CHECK(free.is_refined_by(fixed));
  CHECK(wider_or_equal(narrow, propagate(net, IntervalBox::constant(6, 0, 1), fixed)));
}
}
