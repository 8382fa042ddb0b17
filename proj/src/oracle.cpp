#include "molmip/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "molmip/error.hpp"

namespace molmip {

namespace {

using Edge = std::pair<int, int>;

std::vector<Edge> upper_pairs(int n) {
  std::vector<Edge> p;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) p.emplace_back(u, v);
  return p;
}

long long neighbour_code(const Adjacency& a, int v, int skip_a, int skip_b) {
  const int n = static_cast<int>(a.rows());
  long long c = 0;
  for (int u = 0; u < n; ++u)
    if (u != skip_a && u != skip_b && u != v && a(u, v)) c += 1LL << (n - u - 1);
  return c;
}

Adjacency permuted(const Adjacency& a, const std::vector<int>& order) {
  const int n = static_cast<int>(a.rows());
  Adjacency r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  return r;
}

bool connected(const Adjacency& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return true;
  std::vector<int> seen(static_cast<std::size_t>(n), 0), stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n; ++u)
      if (u != v && a(u, v) && !seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  return count == n;
}

std::vector<int> identity(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

std::string edge_list(const Adjacency& a) {
  std::string s;
  for (auto [u, v] : upper_pairs(static_cast<int>(a.rows())))
    if (a(u, v)) s += fmt::format("{}{}-{}", s.empty() ? "" : " ", u, v);
  return s;
}

}  // namespace

bool earlier_neighbour_condition(const Adjacency& a) {
  for (int v = 1; v < a.rows(); ++v) {
    if (!a(v, v)) continue;
    bool ok = false;
    for (int u = 0; u < v; ++u) ok = ok || a(u, v);
    if (!ok) return false;
  }
  return true;
}

bool neighbour_order_condition(const Adjacency& a) {
  const int n = static_cast<int>(a.rows());
  for (int v = 1; v + 1 < n; ++v)
    if (neighbour_code(a, v, v, v + 1) < neighbour_code(a, v + 1, v, v + 1)) return false;
  return true;
}

void enumerate_feasible(const DesignSpace& space, const ConstraintOptions& options,
                        const std::function<bool(const MolecularGraph&)>& visit, int max_nodes) {
  space.validate();
  const int n = space.n_nodes;
  if (n > max_nodes) throw InvariantError(fmt::format("enumeration limited to {} nodes, space has {}", max_nodes, n));
  if (!options.structural) throw InvariantError("enumeration needs the structural constraints");
  const int max_cov = *std::max_element(space.covalences.begin(), space.covalences.end());
  const int max_order = space.has_triple() ? 3 : 2;

  for (int k = space.exact_n ? n : 2; k <= n; ++k) {
    const auto pairs = upper_pairs(k);
    const int np = static_cast<int>(pairs.size());
    for (long long mask = 0; mask < (1LL << np); ++mask) {
      Adjacency a = Adjacency::Zero(n, n);
      for (int v = 0; v < k; ++v) a(v, v) = 1;
      std::vector<Edge> edges;
      for (int i = 0; i < np; ++i)
        if (mask >> (np - 1 - i) & 1) {
          auto [u, v] = pairs[static_cast<std::size_t>(i)];
          a(u, v) = a(v, u) = 1;
          edges.push_back(pairs[static_cast<std::size_t>(i)]);
        }
      if (!a(0, 1) || !earlier_neighbour_condition(a)) continue;
      if (options.symmetry_neighbors && !neighbour_order_condition(a)) continue;
      std::vector<int> deg(static_cast<std::size_t>(k), 0);
      bool deg_ok = true;
      for (int v = 0; v < k; ++v) {
        for (int u = 0; u < k; ++u)
          if (u != v) deg[static_cast<std::size_t>(v)] += a(u, v);
        deg_ok = deg_ok && deg[static_cast<std::size_t>(v)] >= 1 && deg[static_cast<std::size_t>(v)] <= space.n_neighbors &&
                 deg[static_cast<std::size_t>(v)] <= max_cov;
      }
      if (!deg_ok) continue;

      const int ne = static_cast<int>(edges.size());
      std::vector<int> order(static_cast<std::size_t>(ne), 1);
      bool stop = false;
      while (!stop) {
        // valence used by bonds at each node
        std::vector<int> used(deg.begin(), deg.end()), ndb(static_cast<std::size_t>(k), 0), ntb(static_cast<std::size_t>(k), 0);
        for (int e = 0; e < ne; ++e) {
          const int o = order[static_cast<std::size_t>(e)];
          for (int w : {edges[static_cast<std::size_t>(e)].first, edges[static_cast<std::size_t>(e)].second}) {
            used[static_cast<std::size_t>(w)] += o - 1;
            ndb[static_cast<std::size_t>(w)] += o == 2;
            ntb[static_cast<std::size_t>(w)] += o == 3;
          }
        }
        bool fits = std::all_of(used.begin(), used.end(), [&](int u) { return u <= max_cov; });
        if (fits) {
          MolecularGraph g = MolecularGraph::empty(space);
          g.a = a;
          for (int e = 0; e < ne; ++e) {
            auto [u, v] = edges[static_cast<std::size_t>(e)];
            g.add_bond(u, v, order[static_cast<std::size_t>(e)]);
          }
          std::vector<std::vector<std::pair<int, int>>> choices(static_cast<std::size_t>(k));
          for (int v = 0; v < k; ++v)
            for (int t = 0; t < space.n_types(); ++t) {
              const int cov = space.covalences[static_cast<std::size_t>(t)];
              const int h = cov - used[static_cast<std::size_t>(v)];
              if (h < 0 || h >= space.n_hydrogen) continue;
              if (ndb[static_cast<std::size_t>(v)] > cov / 2 || ntb[static_cast<std::size_t>(v)] > cov / 3) continue;
              choices[static_cast<std::size_t>(v)].emplace_back(t, h);
            }
          if (std::none_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); })) {
            std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
            while (true) {
              for (int v = 0; v < k; ++v) {
                auto [t, h] = choices[static_cast<std::size_t>(v)][pick[static_cast<std::size_t>(v)]];
                g.set_node(v, space, t, h);
              }
              if (validate(g, space, options).empty() && !visit(g)) return;
              int v = k - 1;
              while (v >= 0 && ++pick[static_cast<std::size_t>(v)] == choices[static_cast<std::size_t>(v)].size())
                pick[static_cast<std::size_t>(v--)] = 0;
              if (v < 0) break;
            }
          }
        }
        int e = ne - 1;
        while (e >= 0 && ++order[static_cast<std::size_t>(e)] > max_order) order[static_cast<std::size_t>(e--)] = 1;
        stop = e < 0;
      }
    }
  }
}

std::vector<MolecularGraph> collect_feasible(const DesignSpace& space, const ConstraintOptions& options, int max_nodes) {
  std::vector<MolecularGraph> out;
  enumerate_feasible(space, options, [&](const MolecularGraph& g) {
    out.push_back(g);
    return true;
  }, max_nodes);
  return out;
}

std::optional<BruteOptimum> brute_optimum(const GnnNetworkd& net, const DesignSpace& space,
                                          const ConstraintOptions& options, int max_nodes) {
  std::optional<BruteOptimum> best;
  long long count = 0;
  enumerate_feasible(space, options, [&](const MolecularGraph& g) {
    ++count;
    const Eigen::VectorXd out = forward(net, g.assignment());
    const double obj = out(1) - out(0);
    if (!best || obj > best->objective) best = BruteOptimum{g, obj, 0};
    return true;
  }, max_nodes);
  if (best) best->evaluated = count;
  return best;
}

std::string canonical_form(const MolecularGraph& g) {
  const int n = g.n_nodes();
  std::vector<int> p = identity(n);
  std::string best;
  do {
    std::string s;
    s.reserve(static_cast<std::size_t>(n * (g.x.cols() + n)));
    for (int v : p) {
      s += static_cast<char>('0' + g.a(v, v));
      for (int f = 0; f < g.x.cols(); ++f) s += static_cast<char>('0' + g.x(v, f));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += static_cast<char>('0' + g.bond_order(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]));
    if (best.empty() || s < best) best = std::move(s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

std::string canonical_form(const Adjacency& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> p = identity(n);
  std::string best;
  do {
    std::string s;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += static_cast<char>('0' + a(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]));
    if (best.empty() || s < best) best = std::move(s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

bool isomorphic(const MolecularGraph& a, const MolecularGraph& b) {
  return a.n_nodes() == b.n_nodes() && a.x.cols() == b.x.cols() && canonical_form(a) == canonical_form(b);
}

bool SymmetryReport::all_pass() const {
  return std::all_of(graphs.begin(), graphs.end(), [](const SymmetryGraphReport& g) { return g.survivors > 0 && g.canonical_ok; });
}

std::string SymmetryReport::text() const {
  std::ostringstream os;
  os << fmt::format("n={} classes={}\n", n, graphs.size());
  for (const auto& g : graphs)
    os << fmt::format("  #{:<4} edges={:<2} survivors={:<4} canonical={}  [{}]\n", g.id, g.edges, g.survivors,
                      g.canonical_ok ? "ok" : "FAIL", g.edge_list);
  os << (all_pass() ? "all classes admit an ordering\n" : "some class admits no ordering\n");
  return os.str();
}

nlohmann::json SymmetryReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : graphs)
    arr.push_back({{"id", g.id}, {"nodes", g.nodes}, {"edges", g.edges}, {"edge_list", g.edge_list},
                   {"survivors", g.survivors}, {"canonical_ok", g.canonical_ok}});
  return {{"n", n}, {"classes", graphs.size()}, {"all_pass", all_pass()}, {"graphs", arr}};
}

SymmetryReport check_symmetry_existence(int n) {
  if (n < 1 || n > 6) throw InvariantError(fmt::format("symmetry check supports 1 to 6 nodes, got {}", n));
  const auto pairs = upper_pairs(n);
  const int np = static_cast<int>(pairs.size());
  SymmetryReport report;
  report.n = n;
  std::set<std::string> seen;
  for (long long mask = 0; mask < (1LL << np); ++mask) {
    Adjacency a = Adjacency::Identity(n, n);
    for (int i = 0; i < np; ++i)
      if (mask >> i & 1) {
        auto [u, v] = pairs[static_cast<std::size_t>(i)];
        a(u, v) = a(v, u) = 1;
      }
    if (!connected(a) || !seen.insert(canonical_form(a)).second) continue;

    SymmetryGraphReport r;
    r.id = static_cast<int>(report.graphs.size());
    r.nodes = n;
    r.edges = __builtin_popcountll(static_cast<unsigned long long>(mask));
    r.edge_list = edge_list(a);
    std::vector<int> p = identity(n);
    do {
      const Adjacency b = permuted(a, p);
      if (earlier_neighbour_condition(b) && neighbour_order_condition(b)) ++r.survivors;
    } while (std::next_permutation(p.begin(), p.end()));

    MolecularGraph g;
    g.x = FeatureMatrix::Zero(n, 1);
    g.a = a;
    g.db = g.tb = Adjacency::Zero(n, n);
    const auto order = canonical_indexing(g, {1.0});
    if (!order.empty()) {
      const Adjacency b = permuted(a, order);
      r.canonical_ok = earlier_neighbour_condition(b) && neighbour_order_condition(b);
    }
    report.graphs.push_back(std::move(r));
  }
  return report;
}

LabelingCascade labeling_cascade(const MolecularGraph& g, const DesignSpace& space) {
  const int n = g.n_nodes();
  for (int v = 0; v < n; ++v)
    if (!g.exists(v)) throw InvariantError("labeling cascade needs every node to exist");
  LabelingCascade c;
  std::vector<int> p = identity(n);
  do {
    ++c.total;
    const MolecularGraph r = relabel(g, p);
    if (!earlier_neighbour_condition(r.a)) {
      ++c.violate_connectivity;
      continue;
    }
    ++c.after_connectivity;
    const double first = feature_sum(r, 0, space.ordering);
    bool features_ok = true;
    for (int v = 1; v < n; ++v) features_ok = features_ok && first <= feature_sum(r, v, space.ordering);
    if (!features_ok) continue;
    ++c.after_features;
    if (!neighbour_order_condition(r.a)) continue;
    ++c.after_neighbours;
    c.survivors.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return c;
}

}  // namespace molmip
