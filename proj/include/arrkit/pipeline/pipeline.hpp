#pragma once

// Pipeline stages. Each stage reads the outputs of earlier stages from
// <output_dir>/<stage>/ and writes only its own directory:
//   data/      ticks.csv, calendar.json
//   train/     autoencoder.json, autoencoder_search.json, ae_trials.jsonl, pca.json
//   arr/       arr_<source>_<freq>.csv, arr_<source>_5min_smoothed.csv, reconstruction.json
//   analyze/   kde_<metric>_<freq>.csv, pairs_<metric>_<freq>.csv, correlations.json
//   forecast/  results.json, results.csv, predictions/, trials/
//   report/    report.json
// and a manifest.json whose "created_at" field is the only run-dependent
// value.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "arrkit/forecast/dataset.hpp"
#include "arrkit/indicator/arr.hpp"
#include "arrkit/market/tick_panel.hpp"
#include "arrkit/metrics/returns.hpp"
#include "arrkit/pipeline/config.hpp"

namespace arrkit::pipeline {

void cmd_generate(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_arr(const RunConfig& config);
void cmd_analyze(const RunConfig& config);
void cmd_forecast(const RunConfig& config);
void cmd_report(const RunConfig& config);
void run_all(const RunConfig& config);

std::filesystem::path stage_dir(const RunConfig& config, std::string_view stage);

// Loaded tick data with the reconstruction universe split from the market
// column.
struct MarketData {
    market::TickPanel ticks;
    metrics::ReturnsPanel base;  // 1-second returns, all assets
    std::optional<std::size_t> market_column;
    std::vector<std::size_t> sector_columns;

    std::size_t market() const;  // throws when the market asset is absent
};

MarketData make_market_data(market::TickPanel ticks, const std::string& market_asset);
MarketData load_market_data(const RunConfig& config);

// One forecasting experiment: a task, a model family ("linear", "gbdt" or
// "mlp") and a horizon, fitted with and without the ARR features.
struct ForecastCell {
    forecast::Task task = forecast::Task::regression;
    std::string family;
    metrics::Frequency horizon = metrics::Frequency::min5;

    std::string name() const;
};

// Market log RV (rolling weeks) plus the given ARR series as features.
forecast::FeatureSources feature_sources(const MarketData& md,
                                         const std::map<metrics::Frequency, indicator::ArrSeries>& arr);

// Log RV of the market at the horizon, or crash labels of its returns.
// Weekly targets use non-overlapping weeks.
forecast::TargetSeries forecast_target(const MarketData& md, forecast::Task task, metrics::Frequency horizon,
                                       const CrashConfig& crash);

// Trains on rows whose target precedes test_start and scores on rows anchored
// at or after it. Returns the cell record; status is "ok" or "skipped".
// Trial logs and predictions go under artifacts unless it is empty.
nlohmann::json run_forecast_cell(const RunConfig& config, const ForecastCell& cell,
                                 const forecast::FeatureSources& sources, const forecast::TargetSeries& target,
                                 std::int64_t test_start, const std::filesystem::path& artifacts);

// Fingerprint of the settings that influence outputs (excludes threads and
// the output directory).
std::string config_hash(const RunConfig& config);

}  // namespace arrkit::pipeline
