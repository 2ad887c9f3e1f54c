#pragma once

// Versioned JSON model container shared by the network, autoencoder and PCA
// models:
//   { "format": "arrkit-model", "version": 1, "kind": "<kind>", ... }
// Dense networks store input_dim, per-layer {in, out, activation} and the
// flat parameter vector (per layer: weights row-major out x in, then bias).

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "arrkit/nn/dense_net.hpp"

namespace arrkit::nn {

inline constexpr std::string_view kModelFormat = "arrkit-model";
inline constexpr int kModelFormatVersion = 1;

nlohmann::json net_to_json(const DenseNet& net);
DenseNet net_from_json(const nlohmann::json& j);

nlohmann::json model_header(std::string_view kind);
// Throws DataError unless `j` carries the expected format, version and kind.
void check_model_header(const nlohmann::json& j, std::string_view kind);

void save_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace arrkit::nn
