#include "molmip/camd.hpp"

#include <cmath>

#include <fmt/format.h>

#include "molmip/error.hpp"

namespace molmip {

AdjacencyFixing design_fixing(const DesignSpace& space) {
  AdjacencyFixing fix(space.n_nodes);
  if (space.exact_n)
    for (int v = 0; v < space.n_nodes; ++v) fix.set(v, v, Fix::One);
  fix.set(0, 0, Fix::One);
  fix.set(1, 1, Fix::One);
  fix.set(0, 1, Fix::One);
  return fix;
}

void add_design_variables(MipModel& model, VariableMap& map, const DesignSpace& space) {
  space.validate();
  const int n = space.n_nodes;
  const int nf = space.n_features();
  if (map.a.empty()) {
    const AdjacencyFixing fix = design_fixing(space);
    map.n_nodes = n;
    map.a.assign(static_cast<std::size_t>(n) * n, -1);
    for (int u = 0; u < n; ++u)
      for (int v = u; v < n; ++v) {
        const Fix f = fix(u, v);
        const int id = model.add_variable(fmt::format("A[{}][{}]", u, v), f == Fix::One ? 1.0 : 0.0,
                                          f == Fix::Zero ? 0.0 : 1.0, VarType::Binary);
        map.a[static_cast<std::size_t>(u) * n + v] = map.a[static_cast<std::size_t>(v) * n + u] = id;
      }
  }
  if (map.n_nodes != n) throw DimensionError(fmt::format("model has {} nodes, space has {}", map.n_nodes, n));
  if (map.x.empty()) {
    map.x.emplace_back();
    map.pre.emplace_back(static_cast<std::size_t>(n) * nf, -1);
    map.features.push_back(nf);
    for (int v = 0; v < n; ++v)
      for (int f = 0; f < nf; ++f) map.x[0].push_back(model.add_binary(fmt::format("X[{}][{}]", v, f)));
  }
  if (map.features[0] != nf)
    throw DimensionError(fmt::format("network reads {} features per node, space has {}", map.features[0], nf));
  auto bonds = [&](const char* stem, std::vector<int>& ids) {
    ids.assign(static_cast<std::size_t>(n) * n, -1);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        ids[static_cast<std::size_t>(u) * n + v] = ids[static_cast<std::size_t>(v) * n + u] =
            model.add_binary(fmt::format("{}[{}][{}]", stem, u, v));
  };
  bonds("DB", map.db);
  if (space.has_triple()) bonds("TB", map.tb);
}

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

void require_bonds(const VariableMap& map, const DesignSpace& space) {
  if (map.db.empty() || (space.has_triple() && map.tb.empty()))
    throw InvariantError("bond variables missing: call add_design_variables first");
}

}  // namespace

void add_structural_constraints(MipModel& model, const VariableMap& map, const DesignSpace& space,
                                bool double_bond_equality) {
  require_bonds(map, space);
  const int n = space.n_nodes;
  const bool t3 = space.has_triple();
  auto A = [&](int u, int v) { return map.a_var(u, v); };
  auto X = [&](int v, int f) { return map.input_var(v, f); };

  model.add_constraint("C1[0]", {{A(0, 0), 1.0}}, Sense::Equal, 1.0);
  model.add_constraint("C1[1]", {{A(1, 1), 1.0}}, Sense::Equal, 1.0);
  model.add_constraint("C1[2]", {{A(0, 1), 1.0}}, Sense::Equal, 1.0);
  for (int v = 0; v + 1 < n; ++v)
    model.add_constraint(fmt::format("C2[{}]", v), {{A(v, v), 1.0}, {A(v + 1, v + 1), -1.0}}, Sense::GreaterEqual, 0.0);
  for (int v = 0; v < n; ++v) {
    std::vector<Term> t{{A(v, v), static_cast<double>(n - 1)}};
    for (int u = 0; u < n; ++u)
      if (u != v) t.push_back({A(u, v), -1.0});
    model.add_constraint(fmt::format("C4[{}]", v), t, Sense::GreaterEqual, 0.0);
  }
  for (int v = 1; v < n; ++v) {
    std::vector<Term> t{{A(v, v), 1.0}};
    for (int u = 0; u < v; ++u) t.push_back({A(u, v), -1.0});
    model.add_constraint(fmt::format("C5[{}]", v), t, Sense::LessEqual, 0.0);
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      std::vector<Term> t{{map.db_var(u, v), 1.0}, {A(u, v), -1.0}};
      if (t3) t.push_back({map.tb_var(u, v), 1.0});
      model.add_constraint(fmt::format("C10[{}][{}]", u, v), t, Sense::LessEqual, 0.0);
    }
  auto onehot = [&](const char* stem, const std::vector<int>& idx) {
    for (int v = 0; v < n; ++v) {
      std::vector<Term> t{{A(v, v), 1.0}};
      for (int f : idx) t.push_back({X(v, f), -1.0});
      model.add_constraint(fmt::format("{}[{}]", stem, v), t, Sense::Equal, 0.0);
    }
  };
  onehot("C11", space.idx_types);
  onehot("C12", space.idx_neighbors);
  onehot("C13", space.idx_hydrogen);
  for (int v = 0; v < n; ++v) {
    std::vector<Term> t;
    for (int u = 0; u < n; ++u)
      if (u != v) t.push_back({A(u, v), 1.0});
    for (int i = 0; i < space.n_neighbors; ++i) t.push_back({X(v, space.idx_neighbors[sz(i)]), -(i + 1.0)});
    model.add_constraint(fmt::format("C14[{}]", v), t, Sense::Equal, 0.0);
  }
  auto flag_pair = [&](const char* stem, int flag, auto var) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        model.add_constraint(fmt::format("{}[{}][{}]", stem, u, v),
                             {{var(u, v), 3.0}, {X(u, flag), -1.0}, {X(v, flag), -1.0}, {A(u, v), -1.0}},
                             Sense::LessEqual, 0.0);
  };
  auto DB = [&](int u, int v) { return map.db_var(u, v); };
  auto TB = [&](int u, int v) { return map.tb_var(u, v); };
  flag_pair("C15", space.idx_double, DB);
  if (t3) flag_pair("C16", *space.idx_triple, TB);
  auto capacity = [&](const char* stem, auto var, int order) {
    for (int v = 0; v < n; ++v) {
      std::vector<Term> t;
      for (int u = 0; u < n; ++u)
        if (u != v) t.push_back({var(u, v), 1.0});
      for (int i = 0; i < space.n_types(); ++i)
        t.push_back({X(v, space.idx_types[sz(i)]), -static_cast<double>(space.covalences[sz(i)] / order)});
      model.add_constraint(fmt::format("{}[{}]", stem, v), t, Sense::LessEqual, 0.0);
    }
  };
  capacity("C17", DB, 2);
  if (t3) capacity("C18", TB, 3);
  auto flag_sum = [&](const std::string& stem, int flag, auto var, Sense sense) {
    for (int v = 0; v < n; ++v) {
      std::vector<Term> t{{X(v, flag), 1.0}};
      for (int u = 0; u < n; ++u)
        if (u != v) t.push_back({var(u, v), -1.0});
      model.add_constraint(fmt::format("{}[{}]", stem, v), t, sense, 0.0);
    }
  };
  flag_sum(double_bond_equality ? "C19eq" : "C19", space.idx_double, DB,
           double_bond_equality ? Sense::Equal : Sense::LessEqual);
  if (t3) flag_sum("C20", *space.idx_triple, TB, Sense::LessEqual);
  for (int v = 0; v < n; ++v) {
    std::vector<Term> t;
    for (int i = 0; i < space.n_types(); ++i)
      t.push_back({X(v, space.idx_types[sz(i)]), static_cast<double>(space.covalences[sz(i)])});
    for (int i = 0; i < space.n_neighbors; ++i) t.push_back({X(v, space.idx_neighbors[sz(i)]), -(i + 1.0)});
    for (int i = 0; i < space.n_hydrogen; ++i) t.push_back({X(v, space.idx_hydrogen[sz(i)]), -static_cast<double>(i)});
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      t.push_back({DB(u, v), -1.0});
      if (t3) t.push_back({TB(u, v), -2.0});
    }
    model.add_constraint(fmt::format("C21[{}]", v), t, Sense::Equal, 0.0);
  }
}

void add_dataset_bounds(MipModel& model, const VariableMap& map, const DesignSpace& space) {
  require_bonds(map, space);
  const int n = space.n_nodes;
  auto range = [&](const std::string& lo_name, const std::string& up_name, const std::vector<Term>& t,
                   const CountBound& b, double offset) {
    if (b.lower) model.add_constraint(lo_name, t, Sense::GreaterEqual, *b.lower - offset);
    if (b.upper) model.add_constraint(up_name, t, Sense::LessEqual, *b.upper - offset);
  };
  for (int i = 0; i < space.n_types() && i < static_cast<int>(space.type_bounds.size()); ++i) {
    std::vector<Term> t;
    for (int v = 0; v < n; ++v) t.push_back({map.input_var(v, space.idx_types[sz(i)]), 1.0});
    range(fmt::format("C22_lo[{}]", i), fmt::format("C22_up[{}]", i), t, space.type_bounds[sz(i)], 0.0);
  }
  std::vector<Term> db, tb, ring;
  for (int u = 0; u < n; ++u) {
    ring.push_back({map.a_var(u, u), -1.0});
    for (int v = u + 1; v < n; ++v) {
      db.push_back({map.db_var(u, v), 1.0});
      if (space.has_triple()) tb.push_back({map.tb_var(u, v), 1.0});
      ring.push_back({map.a_var(u, v), 1.0});
    }
  }
  range("C23_lo", "C23_up", db, space.double_bounds, 0.0);
  if (space.has_triple()) range("C24_lo", "C24_up", tb, space.triple_bounds, 0.0);
  range("C25_lo", "C25_up", ring, space.ring_bounds, 1.0);
}

void add_symmetry_feature_constraint(MipModel& model, const VariableMap& map, const DesignSpace& space,
                                     const std::vector<double>& ordering, const std::string& stem) {
  DesignSpace check = space;
  check.ordering = ordering;
  check.validate();
  const int n = space.n_nodes;
  const int nf = space.n_features();
  const double big = std::ldexp(1.0, nf);
  for (int v = 1; v < n; ++v) {
    std::vector<Term> t;
    for (int f = 0; f < nf; ++f) {
      t.push_back({map.input_var(0, f), ordering[sz(f)]});
      t.push_back({map.input_var(v, f), -ordering[sz(f)]});
    }
    t.push_back({map.a_var(v, v), big});
    model.add_constraint(fmt::format("{}[{}]", stem, v), t, Sense::LessEqual, big);
  }
}

void add_symmetry_neighbor_constraint(MipModel& model, const VariableMap& map, const DesignSpace& space) {
  const int n = space.n_nodes;
  for (int v = 1; v + 1 < n; ++v) {
    std::vector<Term> t;
    for (int u = 0; u < n; ++u) {
      if (u == v || u == v + 1) continue;
      const double w = std::ldexp(1.0, n - u - 1);
      t.push_back({map.a_var(u, v), w});
      t.push_back({map.a_var(u, v + 1), -w});
    }
    model.add_constraint(fmt::format("C27[{}]", v), t, Sense::GreaterEqual, 0.0);
  }
}

void add_case_constraints(MipModel& model, const VariableMap& map, const DesignSpace& space, CaseStudy c) {
  if (c == CaseStudy::None) return;
  const int n = space.n_nodes;
  const int nf = space.n_features();
  auto X = [&](int v, int f) { return map.input_var(v, f); };
  auto A = [&](int u, int v) { return map.a_var(u, v); };
  auto type = [&](int v, int t) { return X(v, space.idx_types[sz(t)]); };
  if (c == CaseStudy::Banana) {
    if (nf != 14 || space.n_types() != 4 || space.has_triple())
      throw InvariantError("banana constraints need the 14-feature banana layout");
    const auto h = symmetry_ordering(space, c);
    std::vector<Term> first;
    for (int f = 0; f < nf; ++f) first.push_back({X(0, f), h[sz(f)]});
    model.add_constraint("B2", first, Sense::LessEqual, 4163.0);
    for (int v = 0; v < n; ++v)
      model.add_constraint(fmt::format("B3[{}]", v), {{type(v, 3), 1.0}, {X(v, space.idx_double), 1.0}},
                           Sense::LessEqual, 1.0);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        model.add_constraint(fmt::format("B4[{}][{}]", u, v), {{type(v, 1), 1.0}, {type(u, 1), 1.0}, {A(u, v), 1.0}},
                             Sense::LessEqual, 2.0);
    std::vector<Term> rings;
    for (int v = 0; v < n; ++v) {
      rings.push_back({type(v, 2), 1.0});
      rings.push_back({type(v, 3), 1.0});
    }
    model.add_constraint("B5", rings, Sense::LessEqual, 2.0);
    return;
  }
  if (nf != 17 || space.n_types() != 7 || space.has_triple())
    throw InvariantError("garlic constraints need the 17-feature garlic layout");
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      for (int w = u + 1; w < n; ++w) {
        if (w == v) continue;
        std::vector<Term> t;
        for (int k = 1; k <= 3; ++k) {
          t.push_back({type(u, k), 1.0});
          t.push_back({type(w, k), 1.0});
        }
        for (int k = 0; k <= 3; ++k) t.push_back({type(v, k), 1.0});
        t.push_back({A(u, v), 1.0});
        t.push_back({map.db_var(u, v), -1.0});
        t.push_back({A(v, w), 1.0});
        t.push_back({map.db_var(v, w), -1.0});
        model.add_constraint(fmt::format("G1[{}][{}][{}]", u, v, w), t, Sense::LessEqual, 4.0);
      }
    }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      model.add_constraint(fmt::format("G2[{}][{}]", u, v),
                           {{type(v, 2), 1.0}, {type(u, 1), 1.0}, {type(u, 2), 1.0}, {type(u, 3), 1.0}, {A(u, v), 1.0}},
                           Sense::LessEqual, 2.0);
    }
  for (int v = 0; v < n; ++v)
    model.add_constraint(fmt::format("G3[{}]", v),
                         {{type(v, 4), 1.0}, {type(v, 5), 1.0}, {X(v, space.idx_double), 1.0}}, Sense::LessEqual, 1.0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      model.add_constraint(fmt::format("G4[{}][{}]", u, v), {{type(v, 3), 1.0}, {type(u, 3), 1.0}, {A(u, v), 1.0}},
                           Sense::LessEqual, 2.0);
  std::vector<Term> rings;
  for (int v = 0; v < n; ++v)
    for (int k = 4; k <= 6; ++k) rings.push_back({type(v, k), 1.0});
  model.add_constraint("G5", rings, Sense::LessEqual, 2.0);
}

void add_design_constraints(MipModel& model, const VariableMap& map, const DesignSpace& space,
                            const ConstraintOptions& options) {
  if (options.structural) add_structural_constraints(model, map, space, options.double_bond_equality);
  if (options.dataset_bounds) add_dataset_bounds(model, map, space);
  if (options.symmetry_features)
    add_symmetry_feature_constraint(model, map, space, symmetry_ordering(space, options.case_study),
                                    options.case_study == CaseStudy::Banana ? "B1" : "C26");
  if (options.symmetry_neighbors) add_symmetry_neighbor_constraint(model, map, space);
  add_case_constraints(model, map, space, options.case_study);
}

DesignModel build_camd_model(const DesignSpace& space, const ConstraintOptions& options) {
  DesignModel d{MipModel(space.name), {}};
  add_design_variables(d.model, d.map, space);
  add_design_constraints(d.model, d.map, space, options);
  return d;
}

std::vector<double> graph_point(const MolecularGraph& g, const MipModel& model, const VariableMap& map) {
  std::vector<double> x(sz(model.num_variables()), 0.0);
  const int n = map.n_nodes;
  for (int u = 0; u < n; ++u) {
    for (int f = 0; f < map.features[0]; ++f) x[sz(map.input_var(u, f))] = g.x(u, f);
    for (int v = u; v < n; ++v) {
      x[sz(map.a_var(u, v))] = g.a(u, v);
      if (u == v) continue;
      if (map.db_var(u, v) >= 0) x[sz(map.db_var(u, v))] = g.db(u, v);
      if (map.tb_var(u, v) >= 0) x[sz(map.tb_var(u, v))] = g.tb(u, v);
    }
  }
  return x;
}

MolecularGraph decode(std::span<const double> x, const VariableMap& map, const DesignSpace& space) {
  MolecularGraph g = MolecularGraph::empty(space);
  auto bit = [&](int var) -> std::uint8_t {
    if (var < 0) return 0;
    const double val = x[sz(var)];
    const double r = std::round(val);
    if (std::abs(val - r) > 1e-6 || (r != 0.0 && r != 1.0))
      throw InvariantError(fmt::format("decode: variable {} has non-binary value {}", var, val));
    return static_cast<std::uint8_t>(r);
  };
  const int n = space.n_nodes;
  for (int u = 0; u < n; ++u) {
    for (int f = 0; f < space.n_features(); ++f) g.x(u, f) = bit(map.input_var(u, f));
    for (int v = 0; v < n; ++v) {
      g.a(u, v) = bit(map.a_var(u, v));
      if (u != v) {
        g.db(u, v) = bit(map.db_var(u, v));
        g.tb(u, v) = bit(map.tb_var(u, v));
      }
    }
  }
  return g;
}

long long design_constraint_count(const DesignSpace& space, const ConstraintOptions& options) {
  const long long n = space.n_nodes;
  const long long pairs = n * (n - 1) / 2;
  const long long t3 = space.has_triple() ? 1 : 0;
  long long rows = 0;
  if (options.structural)
    rows += 3 + (n - 1) + n + (n - 1) + pairs + 4 * n + pairs * (1 + t3) + n * (1 + t3) + n * (1 + t3) + n;
  if (options.dataset_bounds) {
    auto ends = [](const CountBound& b) { return (b.lower ? 1 : 0) + (b.upper ? 1 : 0); };
    for (const auto& b : space.type_bounds) rows += ends(b);
    rows += ends(space.double_bounds) + ends(space.ring_bounds);
    if (t3) rows += ends(space.triple_bounds);
  }
  if (options.symmetry_features) rows += n - 1;
  if (options.symmetry_neighbors) rows += std::max(0LL, n - 2);
  if (options.case_study == CaseStudy::Banana) rows += 1 + n + pairs + 1;
  if (options.case_study == CaseStudy::Garlic) rows += n * (n - 1) * (n - 2) / 2 + n * (n - 1) + n + pairs + 1;
  return rows;
}

}  // namespace molmip
