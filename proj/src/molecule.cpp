#include "molmip/molecule.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "molmip/error.hpp"

namespace molmip {

using nlohmann::json;

MolecularGraph MolecularGraph::empty(const DesignSpace& space) {
  const int n = space.n_nodes;
  MolecularGraph g;
  g.x = FeatureMatrix::Zero(n, space.n_features());
  g.a = Adjacency::Zero(n, n);
  g.db = Adjacency::Zero(n, n);
  g.tb = Adjacency::Zero(n, n);
  return g;
}

int MolecularGraph::degree(int v) const {
  int d = 0;
  for (int u = 0; u < n_nodes(); ++u)
    if (u != v) d += a(u, v);
  return d;
}

int MolecularGraph::type_of(int v, const DesignSpace& space) const {
  for (int i = 0; i < space.n_types(); ++i)
    if (x(v, space.idx_types[static_cast<std::size_t>(i)])) return i;
  return -1;
}

int MolecularGraph::bond_order(int u, int v) const {
  if (u == v || !a(u, v)) return 0;
  return 1 + db(u, v) + 2 * tb(u, v);
}

void MolecularGraph::set_node(int v, const DesignSpace& space, int type, int hydrogens) {
  if (type < 0 || type >= space.n_types()) throw InvariantError(fmt::format("node {}: type {} out of range", v, type));
  if (hydrogens < 0 || hydrogens >= space.n_hydrogen)
    throw InvariantError(fmt::format("node {}: hydrogen count {} out of range", v, hydrogens));
  const int deg = degree(v);
  if (deg < 1 || deg > space.n_neighbors)
    throw InvariantError(fmt::format("node {}: degree {} has no neighbour feature", v, deg));
  x.row(v).setZero();
  a(v, v) = 1;
  x(v, space.idx_types[static_cast<std::size_t>(type)]) = 1;
  x(v, space.idx_neighbors[static_cast<std::size_t>(deg - 1)]) = 1;
  x(v, space.idx_hydrogen[static_cast<std::size_t>(hydrogens)]) = 1;
  bool has_db = false, has_tb = false;
  for (int u = 0; u < n_nodes(); ++u) {
    has_db = has_db || db(u, v);
    has_tb = has_tb || tb(u, v);
  }
  x(v, space.idx_double) = has_db;
  if (space.idx_triple) x(v, *space.idx_triple) = has_tb;
}

void MolecularGraph::add_bond(int u, int v, int order) {
  if (u == v || order < 1 || order > 3) throw InvariantError(fmt::format("invalid bond {}-{} of order {}", u, v, order));
  a(u, v) = a(v, u) = 1;
  db(u, v) = db(v, u) = order == 2;
  tb(u, v) = tb(v, u) = order == 3;
}

Assignment MolecularGraph::assignment() const {
  Assignment as;
  as.features = x.cast<double>();
  as.adjacency = a;
  return as;
}

ConstraintOptions case_options(CaseStudy c) {
  ConstraintOptions o;
  o.case_study = c;
  o.double_bond_equality = c != CaseStudy::None;
  return o;
}

std::vector<double> symmetry_ordering(const DesignSpace& space, CaseStudy c) {
  if (c == CaseStudy::Banana) return banana_space(space.n_nodes).ordering;
  return space.ordering;
}

double feature_sum(const MolecularGraph& g, int v, const std::vector<double>& ordering) {
  double s = 0.0;
  for (int f = 0; f < g.x.cols(); ++f)
    if (g.x(v, f)) s += ordering[static_cast<std::size_t>(f)];
  return s;
}

namespace {

double neighbour_code(const MolecularGraph& g, int v, int skip_a, int skip_b) {
  const int n = g.n_nodes();
  double code = 0.0;
  for (int u = 0; u < n; ++u)
    if (u != skip_a && u != skip_b && g.a(u, v)) code += std::ldexp(1.0, n - u - 1);
  return code;
}

int onehot_count(const MolecularGraph& g, int v, const std::vector<int>& idx) {
  int c = 0;
  for (int f : idx) c += g.x(v, f);
  return c;
}

/// sum_i (i + offset) X(v, idx[i])
int onehot_value(const MolecularGraph& g, int v, const std::vector<int>& idx, int offset) {
  int c = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) c += g.x(v, idx[i]) * (static_cast<int>(i) + offset);
  return c;
}

}  // namespace

std::vector<std::string> validate(const MolecularGraph& g, const DesignSpace& space, const ConstraintOptions& options) {
  const int n = space.n_nodes;
  const int nf = space.n_features();
  if (g.a.rows() != n || g.a.cols() != n || g.db.rows() != n || g.db.cols() != n || g.tb.rows() != n ||
      g.tb.cols() != n || g.x.rows() != n || g.x.cols() != nf)
    throw DimensionError(fmt::format("molecule dimensions do not match the {}-node, {}-feature space", n, nf));

  std::vector<std::string> bad;
  auto fail = [&](std::string name) { bad.push_back(std::move(name)); };

  for (int u = 0; u < n; ++u) {
    for (int f = 0; f < nf; ++f)
      if (g.x(u, f) > 1) fail(fmt::format("binary X[{}][{}]", u, f));
    for (int v = 0; v < n; ++v)
      if (g.a(u, v) > 1 || g.db(u, v) > 1 || g.tb(u, v) > 1) fail(fmt::format("binary [{}][{}]", u, v));
  }
  if (space.exact_n)
    for (int v = 0; v < n; ++v)
      if (!g.exists(v)) fail(fmt::format("exact_n[{}]", v));
  if (!space.has_triple())
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (g.tb(u, v)) fail(fmt::format("no_triple[{}][{}]", u, v));

  auto count_db = [&](int v) {
    int c = 0;
    for (int u = 0; u < n; ++u)
      if (u != v) c += g.db(u, v);
    return c;
  };
  auto count_tb = [&](int v) {
    int c = 0;
    for (int u = 0; u < n; ++u)
      if (u != v) c += g.tb(u, v);
    return c;
  };
  auto cov = [&](int v) {
    int c = 0;
    for (int i = 0; i < space.n_types(); ++i)
      c += g.x(v, space.idx_types[static_cast<std::size_t>(i)]) * space.covalences[static_cast<std::size_t>(i)];
    return c;
  };
  auto max_bonds = [&](int v, int order) {
    int c = 0;
    for (int i = 0; i < space.n_types(); ++i)
      c += g.x(v, space.idx_types[static_cast<std::size_t>(i)]) * (space.covalences[static_cast<std::size_t>(i)] / order);
    return c;
  };
  const int xdb = space.idx_double;

  if (options.structural) {
    if (!g.a(0, 0)) fail("C1[0]");
    if (!g.a(1, 1)) fail("C1[1]");
    if (!g.a(0, 1)) fail("C1[2]");
    for (int v = 0; v + 1 < n; ++v)
      if (g.a(v, v) < g.a(v + 1, v + 1)) fail(fmt::format("C2[{}]", v));
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (g.a(u, v) != g.a(v, u)) fail(fmt::format("C3[{}][{}]", u, v));
        if (g.db(u, v) != g.db(v, u)) fail(fmt::format("C6[{}][{}]", u, v));
        if (g.tb(u, v) != g.tb(v, u)) fail(fmt::format("C8[{}][{}]", u, v));
      }
    for (int v = 0; v < n; ++v) {
      if (g.db(v, v)) fail(fmt::format("C7[{}]", v));
      if (g.tb(v, v)) fail(fmt::format("C9[{}]", v));
    }
    for (int v = 0; v < n; ++v) {
      if (!g.exists(v) && g.degree(v) > 0) fail(fmt::format("C4[{}]", v));
      if (v >= 1 && g.exists(v)) {
        bool earlier = false;
        for (int u = 0; u < v; ++u) earlier = earlier || g.a(u, v);
        if (!earlier) fail(fmt::format("C5[{}]", v));
      }
    }
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (g.db(u, v) + g.tb(u, v) > g.a(u, v)) fail(fmt::format("C10[{}][{}]", u, v));
        if (3 * g.db(u, v) > g.x(u, xdb) + g.x(v, xdb) + g.a(u, v)) fail(fmt::format("C15[{}][{}]", u, v));
        if (space.has_triple() && 3 * g.tb(u, v) > g.x(u, *space.idx_triple) + g.x(v, *space.idx_triple) + g.a(u, v))
          fail(fmt::format("C16[{}][{}]", u, v));
      }
    for (int v = 0; v < n; ++v) {
      const int exists = g.a(v, v);
      if (onehot_count(g, v, space.idx_types) != exists) fail(fmt::format("C11[{}]", v));
      if (onehot_count(g, v, space.idx_neighbors) != exists) fail(fmt::format("C12[{}]", v));
      if (onehot_count(g, v, space.idx_hydrogen) != exists) fail(fmt::format("C13[{}]", v));
      if (onehot_value(g, v, space.idx_neighbors, 1) != g.degree(v)) fail(fmt::format("C14[{}]", v));
      if (count_db(v) > max_bonds(v, 2)) fail(fmt::format("C17[{}]", v));
      if (space.has_triple() && count_tb(v) > max_bonds(v, 3)) fail(fmt::format("C18[{}]", v));
      if (options.double_bond_equality) {
        if (g.x(v, xdb) != count_db(v)) fail(fmt::format("C19eq[{}]", v));
      } else if (g.x(v, xdb) > count_db(v)) {
        fail(fmt::format("C19[{}]", v));
      }
      if (space.has_triple() && g.x(v, *space.idx_triple) > count_tb(v)) fail(fmt::format("C20[{}]", v));
      const int used = onehot_value(g, v, space.idx_neighbors, 1) + onehot_value(g, v, space.idx_hydrogen, 0) +
                       count_db(v) + 2 * count_tb(v);
      if (cov(v) != used) fail(fmt::format("C21[{}]", v));
    }
  }

  if (options.dataset_bounds) {
    auto check = [&](const CountBound& b, double value, const std::string& stem) {
      if (b.lower && value < *b.lower) fail(stem + "_lo");
      if (b.upper && value > *b.upper) fail(stem + "_up");
    };
    for (int i = 0; i < space.n_types() && i < static_cast<int>(space.type_bounds.size()); ++i) {
      int c = 0;
      for (int v = 0; v < n; ++v) c += g.x(v, space.idx_types[static_cast<std::size_t>(i)]);
      const auto& b = space.type_bounds[static_cast<std::size_t>(i)];
      if (b.lower && c < *b.lower) fail(fmt::format("C22_lo[{}]", i));
      if (b.upper && c > *b.upper) fail(fmt::format("C22_up[{}]", i));
    }
    int ndb = 0, ntb = 0, edges = 0, nodes = 0;
    for (int u = 0; u < n; ++u) {
      nodes += g.a(u, u);
      for (int v = u + 1; v < n; ++v) {
        ndb += g.db(u, v);
        ntb += g.tb(u, v);
        edges += g.a(u, v);
      }
    }
    check(space.double_bounds, ndb, "C23");
    if (space.has_triple()) check(space.triple_bounds, ntb, "C24");
    check(space.ring_bounds, edges - nodes + 1, "C25");
  }

  if (options.symmetry_features) {
    const auto h = symmetry_ordering(space, options.case_study);
    const std::string stem = options.case_study == CaseStudy::Banana ? "B1" : "C26";
    const double first = feature_sum(g, 0, h);
    for (int v = 1; v < n; ++v)
      if (g.exists(v) && first > feature_sum(g, v, h)) fail(fmt::format("{}[{}]", stem, v));
  }
  if (options.symmetry_neighbors)
    for (int v = 1; v + 1 < n; ++v)
      if (neighbour_code(g, v, v, v + 1) < neighbour_code(g, v + 1, v, v + 1)) fail(fmt::format("C27[{}]", v));

  auto type_at = [&](int v, int t) { return static_cast<int>(g.x(v, space.idx_types[static_cast<std::size_t>(t)])); };
  if (options.case_study == CaseStudy::Banana) {
    const auto h = symmetry_ordering(space, CaseStudy::Banana);
    if (feature_sum(g, 0, h) > 4163) fail("B2");
    int rings = 0;
    for (int v = 0; v < n; ++v) {
      if (type_at(v, 3) + g.x(v, xdb) > 1) fail(fmt::format("B3[{}]", v));
      rings += type_at(v, 2) + type_at(v, 3);
    }
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (type_at(u, 1) && type_at(v, 1) && g.a(u, v)) fail(fmt::format("B4[{}][{}]", u, v));
    if (rings > 2) fail("B5");
  } else if (options.case_study == CaseStudy::Garlic) {
    auto hetero = [&](int v) { return type_at(v, 1) + type_at(v, 2) + type_at(v, 3); };
    auto single = [&](int u, int v) { return g.a(u, v) - g.db(u, v); };
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        for (int w = u + 1; w < n; ++w) {
          if (w == v) continue;
          const int lhs = hetero(u) + hetero(v) + type_at(v, 0) + hetero(w) + single(u, v) + single(v, w);
          if (lhs > 4) fail(fmt::format("G1[{}][{}][{}]", u, v, w));
        }
      }
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && type_at(v, 2) + hetero(u) + g.a(u, v) > 2) fail(fmt::format("G2[{}][{}]", u, v));
    int rings = 0;
    for (int v = 0; v < n; ++v) {
      if (type_at(v, 4) + type_at(v, 5) + g.x(v, xdb) > 1) fail(fmt::format("G3[{}]", v));
      rings += type_at(v, 4) + type_at(v, 5) + type_at(v, 6);
    }
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (type_at(u, 3) + type_at(v, 3) + g.a(u, v) > 2) fail(fmt::format("G4[{}][{}]", u, v));
    if (rings > 2) fail("G5");
  }
  return bad;
}

MolecularGraph relabel(const MolecularGraph& g, const std::vector<int>& order) {
  const int n = g.n_nodes();
  if (static_cast<int>(order.size()) != n) throw DimensionError("relabel: order must list every node");
  MolecularGraph r = g;
  for (int i = 0; i < n; ++i) {
    r.x.row(i) = g.x.row(order[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j) {
      const int oi = order[static_cast<std::size_t>(i)], oj = order[static_cast<std::size_t>(j)];
      r.a(i, j) = g.a(oi, oj);
      r.db(i, j) = g.db(oi, oj);
      r.tb(i, j) = g.tb(oi, oj);
    }
  }
  return r;
}

std::vector<int> canonical_indexing(const MolecularGraph& g, const std::vector<double>& ordering) {
  const int n = g.n_nodes();
  for (int v = 0; v < n; ++v)
    if (!g.exists(v)) throw InvariantError("canonical_indexing needs every node to exist");
  std::vector<int> seen{0};
  std::vector<char> reached(static_cast<std::size_t>(n), 0);
  reached[0] = 1;
  for (std::size_t i = 0; i < seen.size(); ++i)
    for (int u = 0; u < n; ++u)
      if (!reached[static_cast<std::size_t>(u)] && g.a(seen[i], u)) {
        reached[static_cast<std::size_t>(u)] = 1;
        seen.push_back(u);
      }
  if (static_cast<int>(seen.size()) != n) throw InvariantError("canonical_indexing needs a connected graph");
  std::vector<double> fs(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) fs[static_cast<std::size_t>(v)] = feature_sum(g, v, ordering);
  const double min_fs = *std::min_element(fs.begin(), fs.end());

  std::vector<int> order;
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  // Neighbour code of `node` over the positions placed so far, skipping
  // positions skip_a and skip_b.
  auto code_of = [&](int node, int skip_a, int skip_b) {
    double c = 0.0;
    for (int k = 0; k < static_cast<int>(order.size()); ++k)
      if (k != skip_a && k != skip_b && g.a(order[static_cast<std::size_t>(k)], node)) c += std::ldexp(1.0, n - k - 1);
    return c;
  };
  // Positions placed later only add smaller powers of two, so a strict
  // deficit over the placed prefix can never be repaired.
  auto consistent = [&]() {
    const int k = static_cast<int>(order.size());
    for (int v = 1; v + 1 < k; ++v)
      if (code_of(order[static_cast<std::size_t>(v)], v, v + 1) < code_of(order[static_cast<std::size_t>(v + 1)], v, v + 1))
        return false;
    if (k >= 2) {
      const int last = order.back();
      bool touch = false;
      for (int j = 0; j + 1 < k; ++j) touch = touch || g.a(order[static_cast<std::size_t>(j)], last);
      if (!touch) return false;
    }
    return true;
  };

  std::function<bool()> extend = [&]() -> bool {
    const int k = static_cast<int>(order.size());
    if (k == n) return true;
    std::vector<int> cand;
    for (int v = 0; v < n; ++v)
      if (pos[static_cast<std::size_t>(v)] < 0 && (k > 0 || fs[static_cast<std::size_t>(v)] == min_fs)) cand.push_back(v);
    std::stable_sort(cand.begin(), cand.end(), [&](int p, int q) {
      const double cp = code_of(p, -1, -1), cq = code_of(q, -1, -1);
      if (cp != cq) return cp > cq;
      if (fs[static_cast<std::size_t>(p)] != fs[static_cast<std::size_t>(q)])
        return fs[static_cast<std::size_t>(p)] < fs[static_cast<std::size_t>(q)];
      return p < q;
    });
    for (int v : cand) {
      order.push_back(v);
      pos[static_cast<std::size_t>(v)] = k;
      if (consistent() && extend()) return true;
      order.pop_back();
      pos[static_cast<std::size_t>(v)] = -1;
    }
    return false;
  };
  if (!extend()) return {};
  return order;
}

json molecule_to_json(const MolecularGraph& g, const DesignSpace& space) {
  json nodes = json::array();
  json bonds = json::array();
  for (int v = 0; v < g.n_nodes(); ++v) {
    if (!g.exists(v)) continue;
    const int t = g.type_of(v, space);
    int h = -1, nb = -1;
    for (int i = 0; i < space.n_hydrogen; ++i)
      if (g.x(v, space.idx_hydrogen[static_cast<std::size_t>(i)])) h = i;
    for (int i = 0; i < space.n_neighbors; ++i)
      if (g.x(v, space.idx_neighbors[static_cast<std::size_t>(i)])) nb = i + 1;
    json node = {{"index", v},
                 {"type", t >= 0 ? json(space.type_names[static_cast<std::size_t>(t)]) : json(nullptr)},
                 {"hydrogens", h},
                 {"neighbors", nb},
                 {"double_bond", g.x(v, space.idx_double) != 0}};
    if (space.idx_triple) node["triple_bond"] = g.x(v, *space.idx_triple) != 0;
    nodes.push_back(node);
    for (int u = v + 1; u < g.n_nodes(); ++u)
      if (g.a(v, u)) bonds.push_back({{"u", v}, {"v", u}, {"order", g.bond_order(v, u)}});
  }
  return {{"space", space.name}, {"nodes", nodes}, {"bonds", bonds}};
}

MolecularGraph molecule_from_json(const json& doc, const DesignSpace& space) {
  try {
    MolecularGraph g = MolecularGraph::empty(space);
    const int n = space.n_nodes;
    for (const auto& b : doc.at("bonds")) {
      const int u = b.at("u").get<int>(), v = b.at("v").get<int>();
      if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(fmt::format("bond {}-{} outside the {}-node space", u, v, n));
      g.add_bond(u, v, b.value("order", 1));
    }
    for (const auto& node : doc.at("nodes")) {
      const int v = node.at("index").get<int>();
      if (v < 0 || v >= n) throw ParseError(fmt::format("node index {} outside the {}-node space", v, n));
      g.a(v, v) = 1;
      const int t = space.type_index(node.at("type").get<std::string>());
      g.set_node(v, space, t, node.at("hydrogens").get<int>());
    }
    return g;
  } catch (const json::exception& e) {
    throw ParseError(std::string("molecule: ") + e.what());
  }
}

std::string molecule_to_dot(const MolecularGraph& g, const DesignSpace& space) {
  std::ostringstream out;
  out << "graph molecule {\n";
  for (int v = 0; v < g.n_nodes(); ++v) {
    if (!g.exists(v)) continue;
    const int t = g.type_of(v, space);
    out << "  n" << v << " [label=\"" << v << ":" << (t >= 0 ? space.type_names[static_cast<std::size_t>(t)] : "?")
        << "\"];\n";
  }
  const char* styles[] = {"", "solid", "\"solid:invis:solid\"", "\"solid:invis:solid:invis:solid\""};
  for (int u = 0; u < g.n_nodes(); ++u)
    for (int v = u + 1; v < g.n_nodes(); ++v)
      if (g.a(u, v)) out << "  n" << u << " -- n" << v << " [color=" << styles[g.bond_order(u, v)] << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace molmip
