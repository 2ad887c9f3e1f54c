#include "arrkit/forecast/dataset.hpp"

#include <algorithm>

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"

namespace arrkit::forecast {

using metrics::Frequency;

std::string_view task_name(Task t) { return t == Task::regression ? "regression" : "classification"; }

TargetSeries regression_target(const metrics::RiskSeries& log_rv) { return {log_rv.timestamps, log_rv.values}; }

TargetSeries classification_target(const metrics::CrashLabels& labels) {
    TargetSeries t;
    t.timestamps = labels.timestamps;
    t.values.assign(labels.labels.begin(), labels.labels.end());
    return t;
}

namespace {

struct Column {
    std::string name;
    const std::vector<std::int64_t>* stamps;
    const std::vector<double>* values;
};

// Index of the last stamp <= t, or -1.
std::ptrdiff_t as_of(const std::vector<std::int64_t>& stamps, std::int64_t t) {
    const auto it = std::upper_bound(stamps.begin(), stamps.end(), t);
    return static_cast<std::ptrdiff_t>(it - stamps.begin()) - 1;
}

}  // namespace

ForecastDataset build_features(const FeatureSources& sources, const TargetSeries& target, Frequency horizon,
                               bool include_arr, Task task) {
    if (horizon == Frequency::second) throw Error("build_features: unsupported horizon '1s'");
    if (target.timestamps.size() != target.values.size()) throw Error("build_features: malformed target series");
    std::vector<Column> cols;
    for (Frequency d : metrics::kAggregationFrequencies) {
        if (d < horizon) continue;
        const auto it = sources.log_rv.find(d);
        if (it == sources.log_rv.end())
            throw Error("build_features: missing log RV series at " + std::string(metrics::frequency_name(d)));
        cols.push_back({"log_rv_" + std::string(metrics::frequency_name(d)), &it->second.timestamps, &it->second.values});
    }
    if (include_arr) {
        for (Frequency d : metrics::kAggregationFrequencies) {
            if (d < horizon) continue;
            const auto it = sources.arr.find(d);
            if (it == sources.arr.end())
                throw Error("build_features: missing ARR series at " + std::string(metrics::frequency_name(d)));
            cols.push_back({"arr_" + std::string(metrics::frequency_name(d)), &it->second.timestamps, &it->second.values});
        }
    }

    ForecastDataset out;
    out.horizon = horizon;
    out.include_arr = include_arr;
    out.task = task;
    for (const auto& c : cols) out.columns.push_back(c.name);
    std::vector<double> flat;
    std::vector<double> row(cols.size());
    for (std::size_t i = 0; i + 1 < target.timestamps.size(); ++i) {
        const std::int64_t t = target.timestamps[i];
        std::int64_t latest = INT64_MIN;
        bool complete = true;
        for (std::size_t c = 0; c < cols.size() && complete; ++c) {
            const auto k = as_of(*cols[c].stamps, t);
            if (k < 0) {
                complete = false;
                break;
            }
            row[c] = (*cols[c].values)[static_cast<std::size_t>(k)];
            latest = std::max(latest, (*cols[c].stamps)[static_cast<std::size_t>(k)]);
        }
        if (!complete) continue;
        const std::int64_t target_stamp = target.timestamps[i + 1];
        if (!(target_stamp > latest && latest <= t)) throw Error("build_features: target leaks into features");
        flat.insert(flat.end(), row.begin(), row.end());
        out.target.push_back(target.values[i + 1]);
        out.timestamps.push_back(t);
        out.target_timestamps.push_back(target_stamp);
        out.feature_timestamps.push_back(latest);
    }
    if (out.target.empty()) throw Error("build_features: empty resulting dataset");
    out.features = Matrix(out.target.size(), cols.size(), std::move(flat));
    return out;
}

ForecastDataset take_rows(const ForecastDataset& d, const std::vector<std::size_t>& rows) {
    ForecastDataset out;
    out.columns = d.columns;
    out.horizon = d.horizon;
    out.include_arr = d.include_arr;
    out.task = d.task;
    out.features = Matrix(rows.size(), d.features.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        if (r >= d.rows()) throw Error("take_rows: row index out of range");
        std::copy(d.features.row(r).begin(), d.features.row(r).end(), out.features.row(i).begin());
        out.target.push_back(d.target[r]);
        out.timestamps.push_back(d.timestamps[r]);
        out.target_timestamps.push_back(d.target_timestamps[r]);
        out.feature_timestamps.push_back(d.feature_timestamps[r]);
    }
    return out;
}

ForecastDataset slice_by_time(const ForecastDataset& d, std::int64_t begin, std::int64_t end) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < d.rows(); ++i)
        if (d.timestamps[i] >= begin && d.timestamps[i] < end) rows.push_back(i);
    return take_rows(d, rows);
}

void write_dataset_csv(const ForecastDataset& d, const std::filesystem::path& path) {
    std::string out = "timestamp,target_timestamp";
    for (const auto& c : d.columns) out += "," + c;
    out += ",target\n";
    for (std::size_t i = 0; i < d.rows(); ++i) {
        out += std::to_string(d.timestamps[i]);
        out += ',';
        out += std::to_string(d.target_timestamps[i]);
        for (double v : d.features.row(i)) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += format_double(d.target[i]);
        out += '\n';
    }
    write_file(path, out);
}

}  // namespace arrkit::forecast
