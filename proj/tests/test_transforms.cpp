#include <random>

#include "doctest.h"
#include "molmip/transforms.hpp"

using namespace molmip;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

Adjacency random_graph(std::mt19937_64& rng, int n) {
  std::bernoulli_distribution coin(0.5);
  Adjacency a = Adjacency::Identity(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) a(u, v) = a(v, u) = coin(rng);
  return a;
}

Eigen::VectorXd run(const Layerd& layer, const Eigen::VectorXd& x, const Adjacency& a) {
  if (const auto* g = std::get_if<GnnLayerd>(&layer))
    return apply_activation(g->activation, gnn_preactivation(*g, a, x));
  const auto& d = std::get<DenseLayerd>(layer);
  return apply_activation(d.activation, (d.weight * x + d.bias).eval());
}

}  // namespace

TEST_SUITE("transforms") {
TEST_CASE("linear: scalar and identity cases") {
  OpSpec<double> s;
  s.kind = OpKind::Linear;
  s.n_nodes = 3;
  s.w = Eigen::MatrixXd::Constant(1, 1, 2.0);
  s.b = Eigen::VectorXd::Constant(1, 1.0);
  const auto d = transform_linear(s);
  CHECK(d.weight == Eigen::MatrixXd(Eigen::Vector3d(2, 2, 2).asDiagonal()));
  CHECK(d.bias == Eigen::Vector3d(1, 1, 1));

  s.w = Eigen::MatrixXd::Identity(2, 2);
  s.b = Eigen::VectorXd::Zero(2);
  CHECK(transform_linear(s).weight == Eigen::MatrixXd::Identity(6, 6));
}

TEST_CASE("linear: block-diagonal layer equals the per-node map") {
  std::mt19937_64 rng(1);
  OpSpec<double> s;
  s.kind = OpKind::Linear;
  s.n_nodes = 4;
  s.w = random_matrix(rng, 3, 2);
  s.b = random_matrix(rng, 3, 1).col(0);
  const auto d = transform_linear(s);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_matrix(rng, 8, 1).col(0);
    const Eigen::VectorXd y = d.weight * x + d.bias;
    for (int v = 0; v < 4; ++v)
      CHECK((y.segment(3 * v, 3) - (s.w * x.segment(2 * v, 2) + s.b)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gcn: hand-computed normalisations") {
  OpSpec<double> s;
  s.kind = OpKind::GCNConv;
  s.graph_mode = GraphMode::Fixed;
  s.w = Eigen::MatrixXd::Constant(1, 1, 1.0);

  s.n_nodes = 2;
  s.adjacency = Adjacency::Identity(2, 2);
  auto g = transform_gcn_fixed(s);
  CHECK(g.weight(0, 0)(0, 0) == 1.0);
  CHECK(g.weight(0, 1)(0, 0) == 0.0);

  s.adjacency = Adjacency::Ones(2, 2);
  g = transform_gcn_fixed(s);
  CHECK(g.weight(0, 1)(0, 0) == doctest::Approx(0.5));
  CHECK(g.weight(1, 1)(0, 0) == doctest::Approx(0.5));

  s.n_nodes = 3;
  s.adjacency = Adjacency::Identity(3, 3);
  s.adjacency(0, 1) = s.adjacency(1, 0) = s.adjacency(1, 2) = s.adjacency(2, 1) = 1;
  g = transform_gcn_fixed(s);
  CHECK(g.weight(0, 1)(0, 0) == doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(g.weight(1, 1)(0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(g.weight(0, 2)(0, 0) == 0.0);
}

TEST_CASE("gcn: direct definition on random graphs") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4;
    OpSpec<double> s;
    s.kind = OpKind::GCNConv;
    s.graph_mode = GraphMode::Fixed;
    s.n_nodes = n;
    s.adjacency = random_graph(rng, n);
    s.w = random_matrix(rng, 2, 3);
    s.b = random_matrix(rng, 2, 1).col(0);
    const auto g = transform_gcn_fixed(s);
    const Eigen::VectorXd x = random_matrix(rng, 3 * n, 1).col(0);
    const Eigen::VectorXd y = run(g, x, s.adjacency);
    for (int v = 0; v < n; ++v) {
      auto deg = [&](int k) { return 1.0 + s.adjacency.row(k).cast<double>().sum() - 1.0; };
      Eigen::Vector2d ref = s.b + s.w * x.segment(3 * v, 3) / deg(v);
      for (int u = 0; u < n; ++u)
        if (u != v && s.adjacency(u, v)) ref += s.w * x.segment(3 * u, 3) / std::sqrt(deg(u) * deg(v));
      CHECK((y.segment(2 * v, 2) - ref).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("gcn and mean aggregation are rejected on non-fixed graphs") {
  OpSpec<double> s;
  s.kind = OpKind::GCNConv;
  s.graph_mode = GraphMode::NonFixed;
  s.n_nodes = 2;
  s.w = Eigen::MatrixXd::Identity(1, 1);
  CHECK_THROWS_AS(transform(s), UnsupportedOperation);
  s.kind = OpKind::MeanAggregation;
  s.features = 1;
  CHECK_THROWS_AS(transform(s), UnsupportedOperation);
  CHECK_FALSE(is_supported(OpKind::GCNConv, GraphMode::NonFixed));
  CHECK(is_supported(OpKind::SAGEConvSum, GraphMode::NonFixed));
  CHECK(is_supported(OpKind::GlobalMeanPool, GraphMode::NonFixed));
}

TEST_CASE("sage: weight grid pattern and neighbour sum") {
  OpSpec<double> s;
  s.kind = OpKind::SAGEConvSum;
  s.n_nodes = 2;
  s.w = Eigen::MatrixXd::Constant(1, 1, 0.7);
  s.w_neighbor = Eigen::MatrixXd::Constant(1, 1, -0.2);
  auto g = transform_sage(s);
  CHECK(g.weight(0, 0)(0, 0) == 0.7);
  CHECK(g.weight(1, 1)(0, 0) == 0.7);
  CHECK(g.weight(0, 1)(0, 0) == -0.2);
  CHECK(g.weight(1, 0)(0, 0) == -0.2);

  s.n_nodes = 3;
  s.w = Eigen::MatrixXd::Zero(2, 2);
  s.w_neighbor = Eigen::MatrixXd::Identity(2, 2);
  g = transform_sage(s);
  Adjacency path = Adjacency::Identity(3, 3);
  path(0, 1) = path(1, 0) = path(1, 2) = path(2, 1) = 1;
  Eigen::VectorXd x(6);
  x << 1, 2, 3, 4, 5, 6;
  const Eigen::VectorXd y = run(g, x, path);
  CHECK(y.segment(2, 2) == Eigen::Vector2d(6, 8));
}

TEST_CASE("sage: direct definition on random inputs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    OpSpec<double> s;
    s.kind = OpKind::SAGEConvSum;
    s.n_nodes = 4;
    s.w = random_matrix(rng, 2, 3);
    s.w_neighbor = random_matrix(rng, 2, 3);
    s.b = random_matrix(rng, 2, 1).col(0);
    s.activation = Activation::ReLU;
    const auto g = transform_sage(s);
    const Adjacency a = random_graph(rng, 4);
    const Eigen::VectorXd x = random_matrix(rng, 12, 1).col(0);
    const Eigen::VectorXd y = run(g, x, a);
    for (int v = 0; v < 4; ++v) {
      Eigen::Vector2d ref = s.w * x.segment(3 * v, 3) + s.b;
      for (int u = 0; u < 4; ++u)
        if (u != v && a(u, v)) ref += s.w_neighbor * x.segment(3 * u, 3);
      CHECK((y.segment(2 * v, 2) - ref.cwiseMax(0.0)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("aggregations on a fixed graph") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    OpSpec<double> s;
    s.kind = trial % 2 ? OpKind::MeanAggregation : OpKind::SumAggregation;
    s.graph_mode = GraphMode::Fixed;
    s.n_nodes = 4;
    s.features = 2;
    s.adjacency = random_graph(rng, 4);
    const auto g = std::get<GnnLayerd>(transform(s));
    const Eigen::VectorXd x = random_matrix(rng, 8, 1).col(0);
    const Eigen::VectorXd y = run(g, x, s.adjacency);
    for (int v = 0; v < 4; ++v) {
      Eigen::Vector2d ref = Eigen::Vector2d::Zero();
      int deg = 0;
      for (int u = 0; u < 4; ++u)
        if (u != v && s.adjacency(u, v)) {
          ref += x.segment(2 * u, 2);
          ++deg;
        }
      if (s.kind == OpKind::MeanAggregation && deg > 0) ref /= deg;
      CHECK((y.segment(2 * v, 2) - ref).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("pooling matrices") {
  OpSpec<double> s;
  s.kind = OpKind::GlobalMeanPool;
  CHECK(transform_pool(s, 1, 3).weight == Eigen::MatrixXd::Identity(3, 3));
  const auto mean = transform_pool(s, 4, 1);
  CHECK(mean.weight == Eigen::RowVector4d(0.25, 0.25, 0.25, 0.25));

  s.kind = OpKind::GlobalAddPool;
  const auto add = transform_pool(s, 3, 2);
  CHECK(add.weight * Eigen::VectorXd::Ones(6) == Eigen::Vector2d(3, 3));

  s.kind = OpKind::GlobalMeanPool;
  const auto m = transform_pool(s, 5, 3);
  s.kind = OpKind::GlobalAddPool;
  const auto a = transform_pool(s, 5, 3);
  CHECK((m.weight - a.weight / 5.0).cwiseAbs().maxCoeff() < 1e-15);
}
}
