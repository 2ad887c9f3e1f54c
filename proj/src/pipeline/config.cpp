#include "arrkit/pipeline/config.hpp"

#include <cmath>

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"

namespace arrkit::pipeline {

using nlohmann::json;

RunConfig default_config() {
    RunConfig c;
    auto& s = c.synthetic;
    s.n_assets = 12;
    s.include_market = true;
    s.n_sessions = 20;
    s.n_factors = 2;
    s.regime_schedule = {{0, 19, 1.0, 0.5}};
    s.nonlinearity = 0.3;
    s.return_scale = 1e-4;
    s.intraday_amplitude = 0.5;
    s.block_seconds = 300;
    s.coupling_dispersion = 0.4;
    s.vol_persistence = 0.9;
    s.vol_of_vol = 0.1;
    s.coupling_to_vol = 0.5;
    s.market_link = 0.0;
    s.seed = c.seed;
    return c;
}

void RunConfig::validate() const {
    if (threads == 0) throw DataError("config: threads must be positive");
    if (data.source != "synthetic" && data.source != "csv")
        throw DataError("config: data.source must be 'synthetic' or 'csv'");
    if (data.source == "csv" && data.csv_path.empty()) throw DataError("config: data.csv_path is required for csv data");
    if (data.source == "csv" && data.dates.empty()) throw DataError("config: data.dates is required for csv data");
    if (data.source == "synthetic") synthetic.validate();
    if (!(splits.train > 0.0) || !(splits.validation > 0.0) || splits.train + splits.validation >= 1.0)
        throw DataError("config: split shares must be positive and leave room for a test split");
    if (!use_autoencoder && !use_pca) throw DataError("config: models selects neither autoencoder nor pca");
    if (autoencoder.iterations == 0) throw DataError("config: autoencoder.iterations must be positive");
    autoencoder.grid.validate();
    if (forecast.iterations == 0 || forecast.bootstrap == 0 || bootstrap == 0)
        throw DataError("config: search and bootstrap budgets must be positive");
    if (forecast.folds < 2) throw DataError("config: forecast.folds must be at least 2");
    if (!(crash.lambda > 0.0)) throw DataError("config: crash.lambda must be positive");
    if (analysis.grid_size < 2) throw DataError("config: analysis.grid_size must be at least 2");
    for (const auto& f : forecast.families)
        if (f != "linear" && f != "gbdt" && f != "mlp")
            throw DataError("config: unknown forecast family '" + f + "' (expected linear, gbdt or mlp)");
    if (use_autoencoder == false && (analysis.source == indicator::Source::autoencoder ||
                                     forecast.source == indicator::Source::autoencoder))
        throw DataError("config: analysis/forecast source is autoencoder but models excludes it");
    if (use_pca == false && (analysis.source == indicator::Source::pca || forecast.source == indicator::Source::pca))
        throw DataError("config: analysis/forecast source is pca but models excludes it");
}

SplitSessions RunConfig::split_sessions(std::size_t n) const {
    const auto n_train = static_cast<std::size_t>(std::floor(splits.train * static_cast<double>(n)));
    const auto n_val = static_cast<std::size_t>(std::floor(splits.validation * static_cast<double>(n)));
    if (n_train == 0 || n_val == 0 || n_train + n_val >= n)
        throw DataError("config: " + std::to_string(n) + " sessions are too few for the configured splits");
    SplitSessions s;
    s.train_first = 0;
    s.train_last = n_train - 1;
    s.val_first = n_train;
    s.val_last = n_train + n_val - 1;
    s.test_first = n_train + n_val;
    s.test_last = n - 1;
    return s;
}

namespace {

std::vector<Date> dates_from(const json& j) {
    std::vector<Date> out;
    for (const auto& d : j) out.push_back(Date::parse(d.get<std::string>()));
    return out;
}

json dates_to(const std::vector<Date>& dates) {
    json out = json::array();
    for (const auto& d : dates) out.push_back(d.to_string());
    return out;
}

std::vector<metrics::Frequency> frequencies_from(const json& j) {
    std::vector<metrics::Frequency> out;
    for (const auto& f : j) {
        const auto freq = metrics::parse_frequency(f.get<std::string>());
        if (freq == metrics::Frequency::second) throw DataError("config: '1s' is not an aggregation frequency");
        out.push_back(freq);
    }
    return out;
}

json frequencies_to(const std::vector<metrics::Frequency>& fs) {
    json out = json::array();
    for (auto f : fs) out.push_back(std::string(metrics::frequency_name(f)));
    return out;
}

template <class T>
void read(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw DataError("config: top level must be an object");
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
        throw DataError("config: unsupported schema_version " + std::to_string(version) + " (expected " +
                        std::to_string(kSchemaVersion) + ")");
    RunConfig c = default_config();
    try {
        read(j, "seed", c.seed);
        read(j, "threads", c.threads);
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("data")) {
            const auto& d = j.at("data");
            read(d, "source", c.data.source);
            if (d.contains("csv_path")) c.data.csv_path = d.at("csv_path").get<std::string>();
            if (d.contains("dates")) c.data.dates = dates_from(d.at("dates"));
            if (d.contains("half_days")) c.data.half_days = dates_from(d.at("half_days"));
        }
        auto& s = c.synthetic;
        if (j.contains("synthetic")) {
            const auto& g = j.at("synthetic");
            read(g, "n_assets", s.n_assets);
            read(g, "include_market", s.include_market);
            read(g, "n_sessions", s.n_sessions);
            read(g, "n_factors", s.n_factors);
            read(g, "nonlinearity", s.nonlinearity);
            read(g, "return_scale", s.return_scale);
            read(g, "intraday_amplitude", s.intraday_amplitude);
            read(g, "block_seconds", s.block_seconds);
            read(g, "coupling_dispersion", s.coupling_dispersion);
            read(g, "vol_persistence", s.vol_persistence);
            read(g, "vol_of_vol", s.vol_of_vol);
            read(g, "coupling_to_vol", s.coupling_to_vol);
            read(g, "market_link", s.market_link);
            if (g.contains("start_date")) s.start_date = Date::parse(g.at("start_date").get<std::string>());
            if (g.contains("regimes")) {
                s.regime_schedule.clear();
                for (const auto& r : g.at("regimes"))
                    s.regime_schedule.push_back({r.at("first_session").get<std::size_t>(),
                                                 r.at("last_session").get<std::size_t>(),
                                                 r.value("loading_scale", 1.0), r.value("idiosyncratic_vol", 0.5)});
            } else {
                s.regime_schedule = {{0, s.n_sessions - 1, 1.0, 0.5}};
            }
        }
        s.seed = c.seed;
        s.half_days = c.data.half_days;
        read(j, "market_asset", c.market_asset);
        if (j.contains("splits")) {
            const auto& sp = j.at("splits");
            read(sp, "train", c.splits.train);
            read(sp, "validation", c.splits.validation);
            const auto pca_fit = sp.value("pca_fit", std::string("train+validation"));
            if (pca_fit != "train" && pca_fit != "train+validation")
                throw DataError("config: splits.pca_fit must be 'train' or 'train+validation'");
            c.splits.pca_includes_validation = pca_fit == "train+validation";
        }
        if (j.contains("models")) {
            const auto m = j.at("models").get<std::string>();
            if (m != "autoencoder" && m != "pca" && m != "both")
                throw DataError("config: models must be 'autoencoder', 'pca' or 'both'");
            c.use_autoencoder = m != "pca";
            c.use_pca = m != "autoencoder";
        }
        if (j.contains("autoencoder")) {
            const auto& a = j.at("autoencoder");
            read(a, "iterations", c.autoencoder.iterations);
            read(a, "max_epochs", c.autoencoder.grid.max_epochs);
            read(a, "patience", c.autoencoder.grid.early_stop_patience);
            if (a.contains("grid")) {
                const auto& g = a.at("grid");
                read(g, "dropout_rate", c.autoencoder.grid.dropout_rate);
                read(g, "l1_weight", c.autoencoder.grid.l1_weight);
                read(g, "minibatch_size", c.autoencoder.grid.minibatch_size);
                read(g, "learning_rate", c.autoencoder.grid.learning_rate);
                read(g, "max_grad_norm", c.autoencoder.grid.max_grad_norm);
            }
        }
        if (j.contains("pca")) read(j.at("pca"), "k", c.pca_k);
        if (j.contains("frequencies")) c.frequencies = frequencies_from(j.at("frequencies"));
        if (j.contains("analysis")) {
            const auto& a = j.at("analysis");
            if (a.contains("source")) c.analysis.source = indicator::parse_source(a.at("source").get<std::string>());
            read(a, "grid_size", c.analysis.grid_size);
        }
        if (j.contains("forecast")) {
            const auto& f = j.at("forecast");
            if (f.contains("source")) c.forecast.source = indicator::parse_source(f.at("source").get<std::string>());
            if (f.contains("horizons")) c.forecast.horizons = frequencies_from(f.at("horizons"));
            read(f, "families", c.forecast.families);
            if (f.contains("tasks")) {
                c.forecast.tasks.clear();
                for (const auto& t : f.at("tasks")) {
                    const auto name = t.get<std::string>();
                    if (name == "regression")
                        c.forecast.tasks.push_back(forecast::Task::regression);
                    else if (name == "classification")
                        c.forecast.tasks.push_back(forecast::Task::classification);
                    else
                        throw DataError("config: unknown forecast task '" + name + "'");
                }
            }
            read(f, "iterations", c.forecast.iterations);
            read(f, "folds", c.forecast.folds);
            read(f, "bootstrap", c.forecast.bootstrap);
            read(f, "min_train_rows", c.forecast.min_train_rows);
            read(f, "min_test_rows", c.forecast.min_test_rows);
        }
        if (j.contains("crash")) {
            read(j.at("crash"), "lambda", c.crash.lambda);
            read(j.at("crash"), "threshold", c.crash.threshold);
        }
        read(j, "bootstrap", c.bootstrap);
    } catch (const json::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        static const std::vector<std::string> known = {
            "schema_version", "seed", "threads", "output_dir", "data", "synthetic", "market_asset", "splits",
            "models", "autoencoder", "pca", "frequencies", "analysis", "forecast", "crash", "bootstrap"};
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw DataError("config: unknown field '" + key + "'");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

json to_json(const RunConfig& c) {
    const auto& s = c.synthetic;
    json regimes = json::array();
    for (const auto& r : s.regime_schedule)
        regimes.push_back({{"first_session", r.first_session},
                           {"last_session", r.last_session},
                           {"loading_scale", r.loading_scale},
                           {"idiosyncratic_vol", r.idiosyncratic_vol}});
    json tasks = json::array();
    for (auto t : c.forecast.tasks) tasks.push_back(std::string(forecast::task_name(t)));
    const auto& g = c.autoencoder.grid;
    return {
        {"schema_version", kSchemaVersion},
        {"seed", c.seed},
        {"threads", c.threads},
        {"output_dir", c.output_dir.string()},
        {"data",
         {{"source", c.data.source},
          {"csv_path", c.data.csv_path.string()},
          {"dates", dates_to(c.data.dates)},
          {"half_days", dates_to(c.data.half_days)}}},
        {"synthetic",
         {{"n_assets", s.n_assets},
          {"include_market", s.include_market},
          {"n_sessions", s.n_sessions},
          {"n_factors", s.n_factors},
          {"regimes", regimes},
          {"nonlinearity", s.nonlinearity},
          {"return_scale", s.return_scale},
          {"intraday_amplitude", s.intraday_amplitude},
          {"block_seconds", s.block_seconds},
          {"coupling_dispersion", s.coupling_dispersion},
          {"vol_persistence", s.vol_persistence},
          {"vol_of_vol", s.vol_of_vol},
          {"coupling_to_vol", s.coupling_to_vol},
          {"market_link", s.market_link},
          {"start_date", s.start_date.to_string()}}},
        {"market_asset", c.market_asset},
        {"splits",
         {{"train", c.splits.train},
          {"validation", c.splits.validation},
          {"pca_fit", c.splits.pca_includes_validation ? "train+validation" : "train"}}},
        {"models", c.use_autoencoder && c.use_pca ? "both" : (c.use_autoencoder ? "autoencoder" : "pca")},
        {"autoencoder",
         {{"iterations", c.autoencoder.iterations},
          {"max_epochs", g.max_epochs},
          {"patience", g.early_stop_patience},
          {"grid",
           {{"dropout_rate", g.dropout_rate},
            {"l1_weight", g.l1_weight},
            {"minibatch_size", g.minibatch_size},
            {"learning_rate", g.learning_rate},
            {"max_grad_norm", g.max_grad_norm}}}}},
        {"pca", {{"k", c.pca_k}}},
        {"frequencies", frequencies_to(c.frequencies)},
        {"analysis", {{"source", std::string(indicator::source_name(c.analysis.source))}, {"grid_size", c.analysis.grid_size}}},
        {"forecast",
         {{"source", std::string(indicator::source_name(c.forecast.source))},
          {"horizons", frequencies_to(c.forecast.horizons)},
          {"families", c.forecast.families},
          {"tasks", tasks},
          {"iterations", c.forecast.iterations},
          {"folds", c.forecast.folds},
          {"bootstrap", c.forecast.bootstrap},
          {"min_train_rows", c.forecast.min_train_rows},
          {"min_test_rows", c.forecast.min_test_rows}}},
        {"crash", {{"lambda", c.crash.lambda}, {"threshold", c.crash.threshold}}},
        {"bootstrap", c.bootstrap},
    };
}

}  // namespace arrkit::pipeline
