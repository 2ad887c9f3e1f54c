#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "arrkit/core/matrix.hpp"
#include "arrkit/forecast/dataset.hpp"
#include "arrkit/nn/dense_net.hpp"

namespace arrkit::forecast {

enum class Family { ridge, logistic_l1, gbdt, mlp };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

// Hyperparameters by their conventional argument names; booleans are 0 / 1.
using Params = std::map<std::string, double>;
using Grid = std::map<std::string, std::vector<double>>;

// Search grids of each family. The linear family maps to ridge for
// regression and L1 logistic regression for classification.
Grid default_grid(Family family, Task task);
Family linear_family(Task task);

nlohmann::json to_json(const Params& p);

class Model {
public:
    virtual ~Model() = default;
    // Regression values or positive-class probabilities.
    virtual std::vector<double> predict(const Matrix& x) const = 0;
    virtual nlohmann::json to_json() const = 0;
};

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;  // 1 where the training std is 0

    static Standardizer fit(const Matrix& x);
    Matrix apply(const Matrix& x) const;
};

// Ridge: minimizes ||y - X b - c||^2 + alpha ||b||^2 with c unpenalized.
class RidgeModel : public Model {
public:
    std::vector<double> coef;  // in the original feature units
    double intercept = 0.0;

    std::vector<double> predict(const Matrix& x) const override;
    nlohmann::json to_json() const override;
};

RidgeModel fit_ridge(const Matrix& x, std::span<const double> y, double alpha, bool fit_intercept,
                     bool standardize = false);

// L1 logistic regression without intercept on standardized features,
// minimizing mean log-loss + ||b||_1 / (C n) by accelerated proximal
// gradient.
class LogisticModel : public Model {
public:
    Standardizer standardizer;
    std::vector<double> coef;  // standardized units
    std::size_t iterations = 0;
    double tolerance = 0.0;  // final gradient-map norm
    bool converged = false;

    std::vector<double> decision(const Matrix& x) const;
    std::vector<double> predict(const Matrix& x) const override;
    nlohmann::json to_json() const override;
};

struct LogisticConfig {
    double tolerance = 1e-6;
    std::size_t max_iterations = 10000;
};

LogisticModel fit_logistic_l1(const Matrix& x, std::span<const double> labels, double c,
                              const LogisticConfig& config = {});

struct GbdtConfig {
    double learning_rate = 0.1;
    std::size_t n_estimators = 100;
    std::size_t num_leaves = 31;
    double reg_alpha = 0.0;   // L1 on leaf values
    double reg_lambda = 0.0;  // L2 on leaf values
    std::size_t min_data_in_leaf = 20;
    double min_sum_hessian_in_leaf = 1e-3;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

class GbdtModel : public Model {
public:
    Task task = Task::regression;
    double base_score = 0.0;
    std::vector<std::vector<TreeNode>> trees;  // leaf values already scaled by the learning rate

    std::vector<double> raw_score(const Matrix& x) const;
    std::vector<double> predict(const Matrix& x) const override;
    nlohmann::json to_json() const override;
};

// Gradient boosting with exact greedy splits and best-first growth;
// squared loss for regression, logistic loss for classification.
GbdtModel fit_gbdt(const Matrix& x, std::span<const double> y, Task task, const GbdtConfig& config);

struct MlpConfig {
    std::size_t hidden = 100;
    double alpha = 1e-4;  // L2 on weights
    double learning_rate_init = 1e-3;
    bool early_stopping = true;
    std::size_t max_iter = 500;
    double validation_fraction = 0.1;
    std::size_t n_iter_no_change = 10;
    double tol = 1e-4;
    std::size_t batch_size = 200;
    std::uint64_t seed = 0;
};

class MlpModel : public Model {
public:
    Task task = Task::regression;
    Standardizer standardizer;
    double y_mean = 0.0;
    double y_scale = 1.0;
    nn::DenseNet net;
    std::size_t epochs = 0;

    std::vector<double> predict(const Matrix& x) const override;
    nlohmann::json to_json() const override;
};

MlpModel fit_mlp(const Matrix& x, std::span<const double> y, Task task, const MlpConfig& config);

// Fits a family from a grid point.
std::unique_ptr<Model> fit_model(Family family, Task task, const Params& params, const Matrix& x,
                                 std::span<const double> y, std::uint64_t seed);

// Duplicates randomly drawn minority rows until both classes have equal
// counts. Returned rows keep the originals first.
std::vector<std::size_t> oversample_minority(std::span<const double> labels, std::uint64_t seed);

}  // namespace arrkit::forecast
