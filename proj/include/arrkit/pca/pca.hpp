#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "arrkit/core/reconstruction.hpp"
#include "arrkit/metrics/returns.hpp"

namespace arrkit::pca {

struct PcaModel {
    std::vector<double> mean;
    Matrix covariance;  // 1 / (T - 1) normalization
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
    std::size_t k = 0;
    std::vector<std::string> asset_ids;

    std::size_t assets() const { return mean.size(); }

    friend bool operator==(const PcaModel&, const PcaModel&) = default;
};

// `data` is T x N with T > N.
PcaModel fit_pca(const Matrix& data, std::size_t k);
PcaModel fit_pca(const metrics::ReturnsPanel& panel, std::size_t k);

// Share of total variance carried by the top k components.
double absorption_ratio(const PcaModel& model);

// r_hat = mean + V_k V_k^T (r - mean), row by row.
Matrix project(const PcaModel& model, const Matrix& data);

Reconstruction pca_reconstruct(const PcaModel& model, const Matrix& data);
Reconstruction pca_reconstruct(const PcaModel& model, const metrics::ReturnsPanel& panel);

nlohmann::json to_json(const PcaModel& model);
PcaModel pca_from_json(const nlohmann::json& j);

}  // namespace arrkit::pca
