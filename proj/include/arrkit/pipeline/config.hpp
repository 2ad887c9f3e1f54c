#pragma once

// Run configuration, read from a JSON file. Every field is optional and
// falls back to the default shown here.
//
// {
//   "schema_version": 1,
//   "seed": 42,                     // master seed; stage seeds derive from it
//   "threads": 1,
//   "output_dir": "out",
//   "data": {
//     "source": "synthetic",        // or "csv"
//     "csv_path": "",               // tick CSV: timestamp,asset_id,price
//     "dates": [],                  // csv source: session dates (YYYY-MM-DD)
//     "half_days": []               // dates excluded from the calendar
//   },
//   "synthetic": {                  // see market::SyntheticMarketConfig
//     "n_assets": 12, "include_market": true, "n_sessions": 20, "n_factors": 2,
//     "regimes": [{"first_session": 0, "last_session": 19,
//                  "loading_scale": 1.0, "idiosyncratic_vol": 0.5}],
//     "nonlinearity": 0.3, "return_scale": 1e-4, "intraday_amplitude": 0.5,
//     "block_seconds": 300, "coupling_dispersion": 0.4, "vol_persistence": 0.9,
//     "vol_of_vol": 0.1, "coupling_to_vol": 0.5, "market_link": 0.0,
//     "start_date": "2013-01-02"
//   },                              // market_link 0: the market shares only the
//                                   // volatility level with the sectors
//   "market_asset": "CRSPTMT",      // risk/forecast target; excluded from the
//                                   // reconstruction universe
//   "splits": {                     // contiguous session shares
//     "train": 0.5, "validation": 0.15,   // test takes the rest
//     "pca_fit": "train+validation"       // or "train"
//   },
//   "models": "both",               // "autoencoder", "pca" or "both"
//   "autoencoder": {
//     "iterations": 20, "max_epochs": 100, "patience": 5,
//     "grid": {}                    // optional overrides: dropout_rate,
//                                   // l1_weight, minibatch_size,
//                                   // learning_rate, max_grad_norm
//   },
//   "pca": {"k": 0},                // 0: same K as the autoencoder
//   "frequencies": ["5min", "1hour", "1day", "1week"],
//   "analysis": {"source": "autoencoder", "grid_size": 100},
//   "forecast": {
//     "source": "autoencoder",
//     "horizons": ["5min", "1hour", "1day", "1week"],
//     "families": ["linear", "gbdt", "mlp"],
//     "tasks": ["regression", "classification"],
//     "iterations": 200, "folds": 3, "bootstrap": 500,
//     "min_train_rows": 30, "min_test_rows": 10
//   },
//   "crash": {"lambda": 10, "threshold": -1.5},
//   "bootstrap": 500                // reconstruction comparison resamples
// }

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "arrkit/ae/autoencoder.hpp"
#include "arrkit/forecast/models.hpp"
#include "arrkit/indicator/arr.hpp"
#include "arrkit/market/synthetic.hpp"
#include "arrkit/metrics/returns.hpp"

namespace arrkit::pipeline {

inline constexpr int kSchemaVersion = 1;

struct DataConfig {
    std::string source = "synthetic";
    std::filesystem::path csv_path;
    std::vector<Date> dates;
    std::vector<Date> half_days;
};

struct SplitConfig {
    double train = 0.5;
    double validation = 0.15;
    bool pca_includes_validation = true;
};

// Session ranges [first, last] of each split.
struct SplitSessions {
    std::size_t train_first = 0, train_last = 0;
    std::size_t val_first = 0, val_last = 0;
    std::size_t test_first = 0, test_last = 0;
};

struct AeConfig {
    std::size_t iterations = 20;
    ae::SearchGrid grid;
};

struct AnalysisConfig {
    indicator::Source source = indicator::Source::autoencoder;
    std::size_t grid_size = 100;
};

struct ForecastConfig {
    indicator::Source source = indicator::Source::autoencoder;
    std::vector<metrics::Frequency> horizons{metrics::kAggregationFrequencies.begin(),
                                             metrics::kAggregationFrequencies.end()};
    std::vector<std::string> families{"linear", "gbdt", "mlp"};
    std::vector<forecast::Task> tasks{forecast::Task::regression, forecast::Task::classification};
    std::size_t iterations = 200;
    std::size_t folds = 3;
    std::size_t bootstrap = 500;
    std::size_t min_train_rows = 30;
    std::size_t min_test_rows = 10;
};

struct CrashConfig {
    double lambda = 10.0;
    double threshold = -1.5;
};

struct RunConfig {
    std::uint64_t seed = 42;
    std::size_t threads = 1;
    std::filesystem::path output_dir = "out";
    DataConfig data;
    market::SyntheticMarketConfig synthetic;
    std::string market_asset = "CRSPTMT";
    SplitConfig splits;
    bool use_autoencoder = true;
    bool use_pca = true;
    AeConfig autoencoder;
    std::size_t pca_k = 0;
    std::vector<metrics::Frequency> frequencies{metrics::kAggregationFrequencies.begin(),
                                                metrics::kAggregationFrequencies.end()};
    AnalysisConfig analysis;
    ForecastConfig forecast;
    CrashConfig crash;
    std::size_t bootstrap = 500;

    // Throws DataError on inconsistent settings.
    void validate() const;
    SplitSessions split_sessions(std::size_t n_sessions) const;
};

// Defaults used when no config file is given.
RunConfig default_config();

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);

}  // namespace arrkit::pipeline
