#include "arrkit/forecast/search.hpp"

#include <set>

#include "arrkit/core/error.hpp"
#include "arrkit/core/parallel.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/core/text.hpp"
#include "arrkit/stats/metrics.hpp"

namespace arrkit::forecast {

std::vector<std::pair<std::size_t, std::size_t>> contiguous_folds(std::size_t n, std::size_t folds) {
    if (folds < 2) throw Error("cross validation needs at least 2 folds");
    if (n < folds) throw Error("fewer rows than folds");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    for (std::size_t k = 0; k < folds; ++k) {
        const std::size_t size = n / folds + (k < n % folds ? 1 : 0);
        out.emplace_back(begin, begin + size);
        begin += size;
    }
    return out;
}

std::vector<Params> sample_configs(const Grid& grid, std::size_t iterations, std::uint64_t seed) {
    if (grid.empty()) throw Error("empty hyperparameter grid");
    std::size_t total = 1;
    for (const auto& [k, values] : grid) {
        if (values.empty()) throw Error("hyperparameter '" + k + "' has no values");
        total = total > SIZE_MAX / values.size() ? SIZE_MAX : total * values.size();
    }
    auto decode = [&](std::size_t index) {
        Params p;
        // Last key varies fastest.
        for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
            p[it->first] = it->second[index % it->second.size()];
            index /= it->second.size();
        }
        return p;
    };
    std::vector<Params> out;
    if (total <= iterations) {
        for (std::size_t i = 0; i < total; ++i) out.push_back(decode(i));
        return out;
    }
    Rng rng(seed);
    std::set<std::size_t> seen;
    while (out.size() < iterations) {
        const auto i = static_cast<std::size_t>(rng.index(total));
        if (seen.insert(i).second) out.push_back(decode(i));
    }
    return out;
}

namespace {

double score(Task task, std::span<const double> y, std::span<const double> pred) {
    return task == Task::regression ? stats::r_squared(y, pred) : stats::auroc(y, pred);
}

std::vector<std::size_t> range(std::size_t b, std::size_t e) {
    std::vector<std::size_t> r;
    for (std::size_t i = b; i < e; ++i) r.push_back(i);
    return r;
}

}  // namespace

SearchResult random_search_cv(const ForecastDataset& train, Family family, const Grid& grid,
                              const SearchOptions& options) {
    if (options.iterations == 0) throw Error("random search needs at least one iteration");
    const Task task = train.task;
    const auto folds = contiguous_folds(train.rows(), options.folds);
    const auto configs = sample_configs(grid, options.iterations, derive_seed(options.seed, 0));

    SearchResult result;
    result.family = family;
    result.task = task;
    result.trials.resize(configs.size());
    parallel_for(configs.size(), options.threads, [&](std::size_t i) {
        CvTrial& trial = result.trials[i];
        trial.params = configs[i];
        const std::uint64_t trial_seed = derive_seed(options.seed, i + 1);
        try {
            for (std::size_t k = 0; k < folds.size(); ++k) {
                const auto [vb, ve] = folds[k];
                auto rows = range(0, vb);
                const auto tail = range(ve, train.rows());
                rows.insert(rows.end(), tail.begin(), tail.end());
                ForecastDataset fit = take_rows(train, rows);
                if (options.oversample && task == Task::classification)
                    fit = take_rows(fit, oversample_minority(fit.target, derive_seed(trial_seed, 100 + k)));
                const ForecastDataset val = take_rows(train, range(vb, ve));
                const auto model = fit_model(family, task, trial.params, fit.features, fit.target, derive_seed(trial_seed, k));
                trial.fold_scores.push_back(score(task, val.target, model->predict(val.features)));
            }
            double s = 0.0;
            for (double v : trial.fold_scores) s += v;
            trial.mean_score = s / static_cast<double>(trial.fold_scores.size());
        } catch (const Error& e) {
            trial.failed = true;
            trial.error = e.what();
        }
    });

    bool found = false;
    for (std::size_t i = 0; i < result.trials.size(); ++i) {
        const auto& t = result.trials[i];
        if (t.failed) continue;
        if (!found || t.mean_score > result.best_score) {
            found = true;
            result.best_score = t.mean_score;
            result.best_trial = i;
        }
    }
    if (!found) throw Error("random_search_cv: all " + std::to_string(result.trials.size()) + " trials failed");
    result.best_params = result.trials[result.best_trial].params;
    ForecastDataset fit = train;
    if (options.oversample && task == Task::classification)
        fit = take_rows(train, oversample_minority(train.target, derive_seed(options.seed, 1u << 20)));
    result.model = fit_model(family, task, result.best_params, fit.features, fit.target,
                             derive_seed(options.seed, (1u << 20) + 1));
    return result;
}

nlohmann::json to_json(const CvTrial& trial) {
    nlohmann::json j{{"config", to_json(trial.params)}, {"fold_scores", trial.fold_scores}, {"failed", trial.failed}};
    if (trial.failed)
        j["error"] = trial.error;
    else
        j["mean"] = trial.mean_score;
    return j;
}

void write_trials_jsonl(const SearchResult& result, const std::filesystem::path& path) {
    std::string out;
    for (const auto& t : result.trials) out += to_json(t).dump() + "\n";
    write_file(path, out);
}

}  // namespace arrkit::forecast
