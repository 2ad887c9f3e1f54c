#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arrkit/forecast/dataset.hpp"
#include "arrkit/forecast/models.hpp"

namespace arrkit::forecast {

// Chronologically contiguous folds [begin, end) covering [0, n); earlier
// folds take the remainder rows.
std::vector<std::pair<std::size_t, std::size_t>> contiguous_folds(std::size_t n, std::size_t folds);

// Grid points to evaluate: the full grid in lexicographic key order when it
// has at most `iterations` points, else `iterations` distinct points drawn
// uniformly.
std::vector<Params> sample_configs(const Grid& grid, std::size_t iterations, std::uint64_t seed);

struct CvTrial {
    Params params;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
    bool failed = false;
    std::string error;
};

struct SearchResult {
    Family family = Family::ridge;
    Task task = Task::regression;
    Params best_params;
    double best_score = 0.0;
    std::size_t best_trial = 0;
    std::vector<CvTrial> trials;
    std::unique_ptr<Model> model;  // refit on the full training set
};

struct SearchOptions {
    std::size_t iterations = 200;
    std::size_t folds = 3;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    bool oversample = false;  // classification: balance every training fold
};

// Scores are R^2 (regression) or AUROC (classification), averaged over
// folds; the best trial is refit on all of `train`.
SearchResult random_search_cv(const ForecastDataset& train, Family family, const Grid& grid,
                              const SearchOptions& options);

nlohmann::json to_json(const CvTrial& trial);
void write_trials_jsonl(const SearchResult& result, const std::filesystem::path& path);

}  // namespace arrkit::forecast
