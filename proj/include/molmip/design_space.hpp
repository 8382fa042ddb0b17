#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace molmip {

/// Closed interval with optional ends (absent = unbounded).
struct CountBound {
  std::optional<double> lower;
  std::optional<double> upper;

  bool admits(double value) const {
    return (!lower || value >= *lower) && (!upper || value <= *upper);
  }
};

enum class CaseStudy { None, Banana, Garlic };

std::string to_string(CaseStudy c);
CaseStudy case_from_string(const std::string& s);

/// Parameters of the molecular search space: node count, feature layout,
/// type valences (or fragment attachment counts) and composition bounds.
struct DesignSpace {
  std::string name = "custom";
  int n_nodes = 0;
  std::vector<std::string> type_names;
  std::vector<int> covalences;
  int n_neighbors = 0;
  int n_hydrogen = 0;
  std::vector<int> idx_types;
  std::vector<int> idx_neighbors;
  std::vector<int> idx_hydrogen;
  int idx_double = -1;
  std::optional<int> idx_triple;

  std::vector<CountBound> type_bounds;
  CountBound double_bounds;
  CountBound triple_bounds;
  CountBound ring_bounds;

  /// Fix every node to exist (A(v,v) = 1).
  bool exact_n = true;
  /// Weight h_f of feature f in the node-ordering sum; a permutation of the
  /// powers 2^0 ... 2^(F-1).
  std::vector<double> ordering;

  int n_features() const {
    return static_cast<int>(idx_types.size() + idx_neighbors.size() + idx_hydrogen.size()) + 1 + (idx_triple ? 1 : 0);
  }
  int n_types() const { return static_cast<int>(type_names.size()); }
  bool has_triple() const { return idx_triple.has_value(); }
  int type_index(const std::string& name) const;

  /// Throws InvariantError when the index sets do not partition [F], sizes
  /// disagree, the ordering is not a power-of-two permutation, or N / F are
  /// outside [2, 52].
  void validate() const;
};

/// h_f = 2^(F-f-1).
std::vector<double> default_ordering(int n_features);

/// Four atom types {C, N, O, S} with valences {4, 3, 2, 2}; F = 15 with
/// double- and triple-bond flags.
DesignSpace atom_space(int n_nodes);
/// Banana fragments {C, O, *C1CCCO1, *C1CCC(*)C(*)C1}, F = 14, with its
/// rearranged ordering vector.
DesignSpace banana_space(int n_nodes);
/// Garlic fragments {C, N, S, O, *C1CCCCC1*, *C1CCC(*)O1, *C1CCSC1}, F = 17.
DesignSpace garlic_space(int n_nodes);

/// Preset by name ("atom", "banana", "garlic").
DesignSpace preset_space(const std::string& name, int n_nodes);

DesignSpace space_from_json(const nlohmann::json& doc);
nlohmann::json space_to_json(const DesignSpace& space);
/// Reads a space document; a document may instead name a preset:
/// {"preset": "banana", "n_nodes": 4, ...overrides}.
DesignSpace load_space(const std::filesystem::path& path);

}  // namespace molmip
