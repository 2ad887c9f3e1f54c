#include "arrkit/pca/pca.hpp"

#include <cmath>

#include "arrkit/core/error.hpp"
#include "arrkit/nn/serialize.hpp"
#include "arrkit/pca/jacobi.hpp"
#include "arrkit/simd/kernels.hpp"

namespace arrkit::pca {

PcaModel fit_pca(const Matrix& data, std::size_t k) {
    const std::size_t t = data.rows();
    const std::size_t n = data.cols();
    if (n == 0) throw Error("fit_pca: no assets");
    if (t <= n)
        throw Error("fit_pca: need more observations than assets (T = " + std::to_string(t) + ", N = " +
                    std::to_string(n) + ")");
    if (k > n) throw Error("fit_pca: K exceeds the number of assets");
    for (double v : data.flat())
        if (!std::isfinite(v)) throw DataError("fit_pca: non-finite input");

    PcaModel m;
    m.k = k;
    m.mean.assign(n, 0.0);
    std::vector<std::vector<double>> centered(n);
    for (std::size_t a = 0; a < n; ++a) {
        centered[a] = data.column(a);
        m.mean[a] = simd::sum(centered[a]) / static_cast<double>(t);
        simd::add_scalar(-m.mean[a], centered[a]);
    }
    m.covariance = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double c = simd::dot(centered[i], centered[j]) / static_cast<double>(t - 1);
            m.covariance(i, j) = c;
            m.covariance(j, i) = c;
        }
    auto eig = jacobi_eigen(m.covariance);
    m.eigenvalues = std::move(eig.values);
    m.eigenvectors = std::move(eig.vectors);
    return m;
}

PcaModel fit_pca(const metrics::ReturnsPanel& panel, std::size_t k) {
    auto m = fit_pca(panel.returns, k);
    m.asset_ids = panel.asset_ids;
    return m;
}

double absorption_ratio(const PcaModel& model) {
    double total = 0.0;
    for (std::size_t a = 0; a < model.assets(); ++a) total += model.covariance(a, a);
    if (!(total > 0.0)) throw Error("absorption_ratio: zero total variance");
    double top = 0.0;
    for (std::size_t j = 0; j < model.k; ++j) top += model.eigenvalues[j];
    return top / total;
}

Matrix project(const PcaModel& model, const Matrix& data) {
    const std::size_t n = model.assets();
    if (data.cols() != n)
        throw Error("asset universe mismatch: model has " + std::to_string(n) + " assets, data has " +
                    std::to_string(data.cols()));
    Matrix out(data.rows(), n);
    std::vector<double> dev(n), coef(model.k);
    for (std::size_t t = 0; t < data.rows(); ++t) {
        for (std::size_t a = 0; a < n; ++a) dev[a] = data(t, a) - model.mean[a];
        for (std::size_t j = 0; j < model.k; ++j) {
            double c = 0.0;
            for (std::size_t a = 0; a < n; ++a) c += model.eigenvectors(a, j) * dev[a];
            coef[j] = c;
        }
        for (std::size_t a = 0; a < n; ++a) {
            double r = model.mean[a];
            for (std::size_t j = 0; j < model.k; ++j) r += model.eigenvectors(a, j) * coef[j];
            out(t, a) = r;
        }
    }
    return out;
}

Reconstruction pca_reconstruct(const PcaModel& model, const Matrix& data) {
    Reconstruction out;
    out.reconstructed = project(model, data);
    out.squared_error = Matrix(data.rows(), data.cols());
    out.squared_return = Matrix(data.rows(), data.cols());
    const auto r = data.flat();
    const auto rh = out.reconstructed.flat();
    auto se = out.squared_error.flat();
    auto sq = out.squared_return.flat();
    for (std::size_t i = 0; i < r.size(); ++i) {
        se[i] = (r[i] - rh[i]) * (r[i] - rh[i]);
        sq[i] = r[i] * r[i];
    }
    return out;
}

Reconstruction pca_reconstruct(const PcaModel& model, const metrics::ReturnsPanel& panel) {
    if (!model.asset_ids.empty() && model.asset_ids != panel.asset_ids)
        throw Error("asset universe mismatch: panel assets differ from the model's");
    return pca_reconstruct(model, panel.returns);
}

nlohmann::json to_json(const PcaModel& model) {
    auto j = nn::model_header("pca");
    j["n"] = model.assets();
    j["k"] = model.k;
    j["asset_ids"] = model.asset_ids;
    j["mean"] = model.mean;
    j["covariance"] = model.covariance.storage();
    j["eigenvalues"] = model.eigenvalues;
    j["eigenvectors"] = model.eigenvectors.storage();
    return j;
}

PcaModel pca_from_json(const nlohmann::json& j) {
    nn::check_model_header(j, "pca");
    try {
        PcaModel m;
        const auto n = j.at("n").get<std::size_t>();
        m.k = j.at("k").get<std::size_t>();
        m.asset_ids = j.at("asset_ids").get<std::vector<std::string>>();
        m.mean = j.at("mean").get<std::vector<double>>();
        m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
        auto cov = j.at("covariance").get<std::vector<double>>();
        auto vec = j.at("eigenvectors").get<std::vector<double>>();
        if (m.mean.size() != n || m.eigenvalues.size() != n || cov.size() != n * n || vec.size() != n * n || m.k > n)
            throw DataError("pca: inconsistent model dimensions");
        m.covariance = Matrix(n, n, std::move(cov));
        m.eigenvectors = Matrix(n, n, std::move(vec));
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("pca: ") + e.what());
    }
}

}  // namespace arrkit::pca
