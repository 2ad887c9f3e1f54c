#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "arrkit/core/matrix.hpp"

namespace arrkit::stats {

// metric(y_true, y_pred) over flattened rows. Throw arrkit::Error when the
// metric is undefined on a sample.
using Metric = std::function<double(std::span<const double>, std::span<const double>)>;

Metric r_squared_metric();
Metric auroc_metric();

struct BootstrapResult {
    double metric_a = 0.0;
    double metric_b = 0.0;
    double observed_diff = 0.0;  // metric(A) - metric(B) on the full sample
    std::vector<double> samples;
    double p_value = 1.0;  // share of resampled differences <= 0
    std::size_t redraws = 0;
    std::string null_description;
};

// One-sided test of metric(A) > metric(B). Rows (units) of the matrices are
// resampled with replacement; every column of a drawn row enters the metric.
BootstrapResult paired_bootstrap(const Matrix& y_true, const Matrix& pred_a, const Matrix& pred_b, const Metric& metric,
                                 std::size_t resamples, std::uint64_t seed);

BootstrapResult paired_bootstrap(std::span<const double> y_true, std::span<const double> pred_a,
                                 std::span<const double> pred_b, const Metric& metric, std::size_t resamples,
                                 std::uint64_t seed);

nlohmann::json to_json(const BootstrapResult& r, bool include_samples = true);

}  // namespace arrkit::stats
