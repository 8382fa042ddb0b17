#include "molmip/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "molmip/error.hpp"

namespace molmip {

using nlohmann::json;

std::string to_string(CaseStudy c) {
  switch (c) {
    case CaseStudy::None: return "none";
    case CaseStudy::Banana: return "banana";
    case CaseStudy::Garlic: return "garlic";
  }
  return "none";
}

CaseStudy case_from_string(const std::string& s) {
  if (s == "none") return CaseStudy::None;
  if (s == "banana") return CaseStudy::Banana;
  if (s == "garlic") return CaseStudy::Garlic;
  throw ParseError("unknown case '" + s + "' (expected banana, garlic or none)");
}

int DesignSpace::type_index(const std::string& name) const {
  for (std::size_t i = 0; i < type_names.size(); ++i)
    if (type_names[i] == name) return static_cast<int>(i);
  throw InvariantError("unknown type '" + name + "' in space " + this->name);
}

std::vector<double> default_ordering(int n_features) {
  std::vector<double> h(static_cast<std::size_t>(n_features));
  for (int f = 0; f < n_features; ++f) h[static_cast<std::size_t>(f)] = std::ldexp(1.0, n_features - f - 1);
  return h;
}

void DesignSpace::validate() const {
  if (n_nodes < 2 || n_nodes > 52) throw InvariantError(fmt::format("space {}: n_nodes must lie in [2, 52]", name));
  const int f = n_features();
  if (f > 52) throw InvariantError(fmt::format("space {}: at most 52 features", name));
  if (static_cast<int>(idx_types.size()) != n_types() || static_cast<int>(covalences.size()) != n_types())
    throw InvariantError(fmt::format("space {}: idx_types, type_names and covalences must have equal length", name));
  if (static_cast<int>(idx_neighbors.size()) != n_neighbors)
    throw InvariantError(fmt::format("space {}: idx_neighbors must have n_neighbors entries", name));
  if (static_cast<int>(idx_hydrogen.size()) != n_hydrogen)
    throw InvariantError(fmt::format("space {}: idx_hydrogen must have n_hydrogen entries", name));
  std::vector<int> all;
  all.insert(all.end(), idx_types.begin(), idx_types.end());
  all.insert(all.end(), idx_neighbors.begin(), idx_neighbors.end());
  all.insert(all.end(), idx_hydrogen.begin(), idx_hydrogen.end());
  all.push_back(idx_double);
  if (idx_triple) all.push_back(*idx_triple);
  std::sort(all.begin(), all.end());
  for (int i = 0; i < f; ++i)
    if (all[static_cast<std::size_t>(i)] != i)
      throw InvariantError(fmt::format("space {}: feature index sets must partition [0, {})", name, f));
  for (int c : covalences)
    if (c <= 0) throw InvariantError(fmt::format("space {}: covalences must be positive", name));
  if (!type_bounds.empty() && static_cast<int>(type_bounds.size()) != n_types())
    throw InvariantError(fmt::format("space {}: type_bounds must have one entry per type", name));
  if (static_cast<int>(ordering.size()) != f)
    throw InvariantError(fmt::format("space {}: ordering must have {} entries", name, f));
  std::vector<double> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < f; ++i)
    if (sorted[static_cast<std::size_t>(i)] != std::ldexp(1.0, i))
      throw InvariantError(fmt::format("space {}: ordering must be a permutation of 2^0..2^{}", name, f - 1));
}

namespace {

DesignSpace fragment_layout(std::string name, int n, std::vector<std::string> types, std::vector<int> cov,
                            bool triple) {
  DesignSpace s;
  s.name = std::move(name);
  s.n_nodes = n;
  s.type_names = std::move(types);
  s.covalences = std::move(cov);
  s.n_neighbors = 4;
  s.n_hydrogen = 5;
  int at = 0;
  for (std::size_t i = 0; i < s.type_names.size(); ++i) s.idx_types.push_back(at++);
  for (int i = 0; i < s.n_neighbors; ++i) s.idx_neighbors.push_back(at++);
  for (int i = 0; i < s.n_hydrogen; ++i) s.idx_hydrogen.push_back(at++);
  s.idx_double = at++;
  if (triple) s.idx_triple = at++;
  s.type_bounds.assign(s.type_names.size(), CountBound{});
  s.ordering = default_ordering(s.n_features());
  return s;
}

}  // namespace

DesignSpace atom_space(int n_nodes) {
  return fragment_layout("atom", n_nodes, {"C", "N", "O", "S"}, {4, 3, 2, 2}, true);
}

DesignSpace banana_space(int n_nodes) {
  DesignSpace s = fragment_layout("banana", n_nodes, {"C", "O", "*C1CCCO1", "*C1CCC(*)C(*)C1"}, {4, 2, 1, 3}, false);
  // Aromatic fragments rank first, then O, then C; neighbour weights grow
  // with the count, hydrogen weights grow with the count, double bond last.
  const int exponents[14] = {13, 12, 11, 10, 6, 7, 8, 9, 1, 2, 3, 4, 5, 0};
  for (int f = 0; f < 14; ++f) s.ordering[static_cast<std::size_t>(f)] = std::ldexp(1.0, exponents[f]);
  const double half = std::floor(n_nodes / 2.0);
  s.type_bounds[1].upper = half;
  s.double_bounds.upper = half;
  s.ring_bounds.upper = 2;
  return s;
}

DesignSpace garlic_space(int n_nodes) {
  DesignSpace s = fragment_layout("garlic", n_nodes, {"C", "N", "S", "O", "*C1CCCCC1*", "*C1CCC(*)O1", "*C1CCSC1"},
                                  {4, 3, 2, 2, 2, 2, 1}, false);
  const double half = std::floor(n_nodes / 2.0);
  for (int t = 1; t <= 3; ++t) s.type_bounds[static_cast<std::size_t>(t)].upper = half;
  s.double_bounds.upper = half;
  s.ring_bounds.upper = 2;
  return s;
}

DesignSpace preset_space(const std::string& name, int n_nodes) {
  if (name == "atom") return atom_space(n_nodes);
  if (name == "banana") return banana_space(n_nodes);
  if (name == "garlic") return garlic_space(n_nodes);
  throw ParseError("unknown space preset '" + name + "'");
}

namespace {

json bound_to_json(const CountBound& b) {
  return json::array({b.lower ? json(*b.lower) : json(nullptr), b.upper ? json(*b.upper) : json(nullptr)});
}

CountBound bound_from_json(const json& j, const std::string& where) {
  if (j.is_null()) return {};
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [lower, upper] with null for unbounded");
  CountBound b;
  if (!j[0].is_null()) b.lower = j[0].get<double>();
  if (!j[1].is_null()) b.upper = j[1].get<double>();
  return b;
}

template <typename T>
void read_if(const json& doc, const char* key, T& out) {
  if (auto it = doc.find(key); it != doc.end()) out = it->get<T>();
}

}  // namespace

DesignSpace space_from_json(const json& doc) {
  try {
    DesignSpace s;
    const bool preset = doc.contains("preset");
    if (preset) s = preset_space(doc.at("preset").get<std::string>(), doc.at("n_nodes").get<int>());
    read_if(doc, "name", s.name);
    read_if(doc, "n_nodes", s.n_nodes);
    read_if(doc, "type_names", s.type_names);
    read_if(doc, "covalences", s.covalences);
    read_if(doc, "n_neighbors", s.n_neighbors);
    read_if(doc, "n_hydrogen", s.n_hydrogen);
    read_if(doc, "idx_types", s.idx_types);
    read_if(doc, "idx_neighbors", s.idx_neighbors);
    read_if(doc, "idx_hydrogen", s.idx_hydrogen);
    read_if(doc, "idx_double", s.idx_double);
    read_if(doc, "exact_n", s.exact_n);
    if (auto it = doc.find("idx_triple"); it != doc.end())
      s.idx_triple = it->is_null() ? std::nullopt : std::optional<int>(it->get<int>());
    if (!preset) s.type_bounds.assign(s.type_names.size(), CountBound{});
    if (auto it = doc.find("bounds"); it != doc.end()) {
      const json& b = *it;
      if (auto t = b.find("types"); t != b.end()) {
        s.type_bounds.clear();
        for (std::size_t i = 0; i < t->size(); ++i)
          s.type_bounds.push_back(bound_from_json((*t)[i], fmt::format("bounds.types[{}]", i)));
      }
      if (b.contains("double")) s.double_bounds = bound_from_json(b.at("double"), "bounds.double");
      if (b.contains("triple")) s.triple_bounds = bound_from_json(b.at("triple"), "bounds.triple");
      if (b.contains("ring")) s.ring_bounds = bound_from_json(b.at("ring"), "bounds.ring");
    }
    if (auto it = doc.find("ordering"); it != doc.end()) {
      if (it->is_string() && it->get<std::string>() == "default")
        s.ordering = default_ordering(s.n_features());
      else
        s.ordering = it->get<std::vector<double>>();
    } else if (!preset) {
      s.ordering = default_ordering(s.n_features());
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("design space: ") + e.what());
  }
}

json space_to_json(const DesignSpace& s) {
  json doc;
  doc["name"] = s.name;
  doc["n_nodes"] = s.n_nodes;
  doc["type_names"] = s.type_names;
  doc["covalences"] = s.covalences;
  doc["n_neighbors"] = s.n_neighbors;
  doc["n_hydrogen"] = s.n_hydrogen;
  doc["idx_types"] = s.idx_types;
  doc["idx_neighbors"] = s.idx_neighbors;
  doc["idx_hydrogen"] = s.idx_hydrogen;
  doc["idx_double"] = s.idx_double;
  doc["idx_triple"] = s.idx_triple ? json(*s.idx_triple) : json(nullptr);
  json types = json::array();
  for (const auto& b : s.type_bounds) types.push_back(bound_to_json(b));
  doc["bounds"] = {{"types", types},
                   {"double", bound_to_json(s.double_bounds)},
                   {"triple", bound_to_json(s.triple_bounds)},
                   {"ring", bound_to_json(s.ring_bounds)}};
  doc["exact_n"] = s.exact_n;
  doc["ordering"] = s.ordering;
  return doc;
}

DesignSpace load_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open space file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return space_from_json(doc);
}

}  // namespace molmip
