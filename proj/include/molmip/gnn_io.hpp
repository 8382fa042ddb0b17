#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "molmip/gnn.hpp"

namespace molmip {

/// Reads a weight file (see docs/formats.md). Layers given by operation
/// kind ("sage", "gcn", "global_mean_pool", ...) are rewritten into the
/// uniform form on load. Throws ParseError or InvariantError.
GnnNetworkd load_network(const std::filesystem::path& path);
GnnNetworkd network_from_json(const nlohmann::json& doc);

/// Uniform-form document ("gnn" / "dense" layers only).
nlohmann::json network_to_json(const GnnNetworkd& net);
void save_network(const GnnNetworkd& net, const std::filesystem::path& path);

}  // namespace molmip
