#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "arrkit/core/matrix.hpp"
#include "arrkit/indicator/arr.hpp"
#include "arrkit/metrics/risk.hpp"

namespace arrkit::forecast {

enum class Task { regression, classification };

std::string_view task_name(Task t);

struct TargetSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> values;
};

TargetSeries regression_target(const metrics::RiskSeries& log_rv);
TargetSeries classification_target(const metrics::CrashLabels& labels);

struct FeatureSources {
    std::map<metrics::Frequency, metrics::RiskSeries> log_rv;
    std::map<metrics::Frequency, indicator::ArrSeries> arr;
};

// One row per anchor time t: features are the latest values with stamp <= t
// of every series at a frequency d >= horizon; the target is the next value
// of the target series after t.
struct ForecastDataset {
    Matrix features;
    std::vector<double> target;
    std::vector<std::int64_t> timestamps;         // anchor t
    std::vector<std::int64_t> target_timestamps;  // stamp of the target value
    std::vector<std::int64_t> feature_timestamps; // latest feature stamp used by the row
    std::vector<std::string> columns;
    metrics::Frequency horizon = metrics::Frequency::min5;
    bool include_arr = false;
    Task task = Task::regression;

    std::size_t rows() const { return target.size(); }
};

ForecastDataset build_features(const FeatureSources& sources, const TargetSeries& target, metrics::Frequency horizon,
                               bool include_arr, Task task);

// Rows whose anchor lies in [begin, end).
ForecastDataset slice_by_time(const ForecastDataset& d, std::int64_t begin, std::int64_t end);

ForecastDataset take_rows(const ForecastDataset& d, const std::vector<std::size_t>& rows);

void write_dataset_csv(const ForecastDataset& d, const std::filesystem::path& path);

}  // namespace arrkit::forecast
