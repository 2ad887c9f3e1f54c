#include "arrkit/pipeline/pipeline.hpp"

#include <ctime>
#include <map>

#include "arrkit/ae/autoencoder.hpp"
#include "arrkit/core/error.hpp"
#include "arrkit/core/parallel.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/core/text.hpp"
#include "arrkit/forecast/search.hpp"
#include "arrkit/indicator/arr.hpp"
#include "arrkit/metrics/risk.hpp"
#include "arrkit/nn/serialize.hpp"
#include "arrkit/pca/pca.hpp"
#include "arrkit/stats/bootstrap.hpp"
#include "arrkit/stats/kde.hpp"
#include "arrkit/stats/metrics.hpp"

namespace arrkit::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;
using metrics::Frequency;

namespace {

// Stream ids for stage seeds.
constexpr std::uint64_t kAeSearchStream = 1;
constexpr std::uint64_t kReconstructionBootstrapStream = 2;
constexpr std::uint64_t kForecastStream = 3;

std::string now_iso() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string file_hash(const fs::path& p) { return hex64(fnv1a64(read_file(p))); }

void write_manifest(const RunConfig& config, std::string_view stage, const fs::path& dir, json extra) {
    std::vector<std::string> names;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json")
            names.push_back(fs::relative(entry.path(), dir).generic_string());
    std::sort(names.begin(), names.end());
    json outputs = json::object();
    for (const auto& n : names) outputs[n] = file_hash(dir / n);
    json m = std::move(extra);
    m["stage"] = stage;
    m["config_hash"] = config_hash(config);
    m["seed"] = config.seed;
    m["outputs"] = outputs;
    m["created_at"] = now_iso();
    nn::save_json(dir / "manifest.json", m);
}

fs::path fresh_stage_dir(const RunConfig& config, std::string_view stage) {
    const auto dir = stage_dir(config, stage);
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
    return dir;
}

void require_stage(const RunConfig& config, std::string_view stage, std::string_view producer) {
    if (!fs::exists(stage_dir(config, stage) / "manifest.json"))
        throw Error(std::string(producer) + " outputs missing (" + (stage_dir(config, stage) / "manifest.json").string() +
                    ")");
}

market::SessionCalendar read_calendar(const fs::path& path) {
    const auto j = nn::load_json(path);
    std::vector<Date> dates, half;
    for (const auto& d : j.at("dates")) dates.push_back(Date::parse(d.get<std::string>()));
    for (const auto& d : j.at("excluded_dates")) half.push_back(Date::parse(d.get<std::string>()));
    return market::build_session_calendar(dates, half);
}

void write_calendar(const market::SessionCalendar& cal, const fs::path& path) {
    json dates = json::array(), excluded = json::array();
    for (const auto& s : cal.sessions) dates.push_back(s.date.to_string());
    for (const auto& d : cal.excluded_dates) excluded.push_back(d.to_string());
    nn::save_json(path, {{"dates", dates}, {"excluded_dates", excluded}, {"hash", cal.hash()}});
}

metrics::ReturnsPanel sectors(const MarketData& md, std::size_t first, std::size_t last) {
    return metrics::select(md.base, first, last, md.sector_columns);
}

metrics::RiskSeries column_series(const metrics::ReturnsPanel& p, std::size_t col, metrics::SeriesKind kind) {
    metrics::RiskSeries s;
    s.kind = kind;
    s.interval = p.interval;
    s.timestamps = p.timestamps;
    s.values = p.returns.column(col);
    return s;
}

metrics::RiskSeries drawdown_series(const MarketData& md, std::size_t col, const metrics::WindowGrid& grid) {
    std::vector<double> prices;
    for (const auto& [b, e] : grid.rows) prices.push_back(md.ticks.prices(e == 0 ? 0 : e - 1, col));
    metrics::RiskSeries s;
    s.kind = metrics::SeriesKind::drawdown;
    s.interval = grid.frequency;
    s.timestamps = grid.stamps;
    s.values = metrics::drawdown(prices);
    return s;
}

std::string arr_file(indicator::Source s, Frequency f) {
    return "arr_" + std::string(indicator::source_name(s)) + "_" + std::string(metrics::frequency_name(f)) + ".csv";
}

json split_json(const MarketData& md, const SplitSessions& s) {
    auto range = [&](std::size_t a, std::size_t b) {
        return json::array({md.ticks.calendar.sessions[a].date.to_string(), md.ticks.calendar.sessions[b].date.to_string()});
    };
    return {{"train", range(s.train_first, s.train_last)},
            {"validation", range(s.val_first, s.val_last)},
            {"test", range(s.test_first, s.test_last)}};
}

}  // namespace

fs::path stage_dir(const RunConfig& config, std::string_view stage) { return config.output_dir / stage; }

std::size_t MarketData::market() const {
    if (!market_column) throw DataError("market asset is not present in the data");
    return *market_column;
}

std::string config_hash(const RunConfig& config) {
    auto j = to_json(config);
    j.erase("threads");
    j.erase("output_dir");
    return hex64(fnv1a64(j.dump()));
}

MarketData make_market_data(market::TickPanel ticks, const std::string& market_asset) {
    MarketData md;
    md.ticks = std::move(ticks);
    md.base = metrics::log_returns(md.ticks, Frequency::second);
    for (std::size_t c = 0; c < md.ticks.assets(); ++c) {
        if (md.ticks.asset_ids[c] == market_asset)
            md.market_column = c;
        else
            md.sector_columns.push_back(c);
    }
    if (md.sector_columns.empty()) throw DataError("no assets besides the market asset");
    return md;
}

MarketData load_market_data(const RunConfig& config) {
    require_stage(config, "data", "cmd_generate");
    const auto dir = stage_dir(config, "data");
    return make_market_data(market::load_tick_csv(dir / "ticks.csv", read_calendar(dir / "calendar.json")),
                            config.market_asset);
}

// ------------------------------------------------------------------ generate

void cmd_generate(const RunConfig& config) {
    config.validate();
    const auto dir = fresh_stage_dir(config, "data");
    market::TickPanel panel;
    if (config.data.source == "synthetic") {
        panel = market::generate_synthetic_market(config.synthetic);
    } else {
        const auto cal = market::build_session_calendar(config.data.dates, config.data.half_days);
        panel = market::load_tick_csv(config.data.csv_path, cal);
    }
    market::write_tick_csv(panel, dir / "ticks.csv");
    write_calendar(panel.calendar, dir / "calendar.json");
    write_manifest(config, "generate", dir,
                   {{"source", config.data.source},
                    {"sessions", panel.sessions()},
                    {"assets", panel.asset_ids},
                    {"calendar_hash", panel.calendar.hash()}});
}

// --------------------------------------------------------------------- train

void cmd_train(const RunConfig& config) {
    config.validate();
    const auto md = load_market_data(config);
    const auto dir = fresh_stage_dir(config, "train");
    const auto split = config.split_sessions(md.ticks.sessions());
    const auto train = sectors(md, split.train_first, split.train_last);
    const auto val = sectors(md, split.val_first, split.val_last);
    json extra{{"splits", split_json(md, split)}, {"assets", train.asset_ids}};

    if (config.use_autoencoder) {
        const auto search = ae::random_search_ae(train, val, config.autoencoder.grid, config.autoencoder.iterations,
                                                 derive_seed(config.seed, kAeSearchStream), config.threads);
        nn::save_json(dir / "autoencoder.json", ae::to_json(search.best_model));
        std::string trials;
        for (const auto& t : search.trials) trials += ae::to_json(t).dump() + "\n";
        write_file(dir / "ae_trials.jsonl", trials);
        std::size_t failed = 0;
        for (const auto& t : search.trials) failed += t.failed ? 1 : 0;
        nn::save_json(dir / "autoencoder_search.json",
                      {{"best_config", ae::to_json(search.best_config)},
                       {"best_val_loss", search.best_val_loss},
                       {"best_trial", search.best_trial},
                       {"iterations", search.trials.size()},
                       {"failed_trials", failed},
                       {"splits", split_json(md, split)}});
        extra["autoencoder"] = {{"dims", {search.best_model.dims.n, search.best_model.dims.h, search.best_model.dims.k}},
                                {"best_val_loss", search.best_val_loss}};
    }
    if (config.use_pca) {
        const std::size_t last = config.splits.pca_includes_validation ? split.val_last : split.train_last;
        const std::size_t k = config.pca_k ? config.pca_k : ae::architecture(md.sector_columns.size()).k;
        const auto model = pca::fit_pca(sectors(md, split.train_first, last), k);
        nn::save_json(dir / "pca.json", pca::to_json(model));
        extra["pca"] = {{"k", k}, {"absorption_ratio", pca::absorption_ratio(model)}};
    }
    write_manifest(config, "train", dir, extra);
}

// ----------------------------------------------------------------------- arr

void cmd_arr(const RunConfig& config) {
    config.validate();
    require_stage(config, "train", "cmd_train");
    const auto md = load_market_data(config);
    const auto dir = fresh_stage_dir(config, "arr");
    const auto split = config.split_sessions(md.ticks.sessions());
    const auto last = md.ticks.sessions() - 1;
    const auto all = sectors(md, 0, last);
    const auto train_dir = stage_dir(config, "train");

    std::map<indicator::Source, Reconstruction> recs;
    json models = json::object();
    if (config.use_autoencoder) {
        const auto model = ae::autoencoder_from_json(nn::load_json(train_dir / "autoencoder.json"));
        recs[indicator::Source::autoencoder] = ae::reconstruct_series(model, all);
        models["autoencoder"] = file_hash(train_dir / "autoencoder.json");
    }
    if (config.use_pca) {
        const auto model = pca::pca_from_json(nn::load_json(train_dir / "pca.json"));
        recs[indicator::Source::pca] = pca::pca_reconstruct(model, all);
        models["pca"] = file_hash(train_dir / "pca.json");
    }

    for (const auto& [source, rec] : recs) {
        for (Frequency f : config.frequencies) {
            const auto series = indicator::compute_arr(rec, all, f, source);
            indicator::write_arr_csv(series, dir / arr_file(source, f));
            if (f == Frequency::min5) {
                const auto smooth = indicator::smooth_arr(series, indicator::steps_per_day(f));
                indicator::write_arr_csv(smooth, dir / ("arr_" + std::string(indicator::source_name(source)) +
                                                        "_5min_smoothed.csv"));
            }
        }
    }

    // Out-of-sample reconstruction comparison on the test sessions.
    json comparison = json::object();
    const auto [tb, te] = all.session_range(split.test_first, split.test_last);
    const Matrix truth = all.returns.slice_rows(tb, te);
    for (const auto& [source, rec] : recs)
        comparison["r2"][std::string(indicator::source_name(source))] =
            stats::r_squared(truth.flat(), rec.reconstructed.slice_rows(tb, te).flat());
    if (recs.size() == 2) {
        const auto result = stats::paired_bootstrap(
            truth, recs[indicator::Source::autoencoder].reconstructed.slice_rows(tb, te),
            recs[indicator::Source::pca].reconstructed.slice_rows(tb, te), stats::r_squared_metric(), config.bootstrap,
            derive_seed(config.seed, kReconstructionBootstrapStream));
        comparison["bootstrap"] = stats::to_json(result, false);
        comparison["hypothesis"] = "autoencoder R2 > pca R2";
    }
    comparison["test_rows"] = te - tb;
    nn::save_json(dir / "reconstruction.json", comparison);

    const auto& sessions = md.ticks.calendar.sessions;
    json freqs = json::array();
    for (auto f : config.frequencies) freqs.push_back(std::string(metrics::frequency_name(f)));
    write_manifest(config, "arr", dir,
                   {{"models", models},
                    {"frequencies", freqs},
                    {"calendar_hash", md.ticks.calendar.hash()},
                    {"segments",
                     {{"in_sample", {sessions[split.train_first].open, sessions[split.val_last].close}},
                      {"out_of_sample", {sessions[split.test_first].open, sessions[split.test_last].close}}}}});
}

// ------------------------------------------------------------------- analyze

void cmd_analyze(const RunConfig& config) {
    config.validate();
    require_stage(config, "arr", "cmd_arr");
    const auto md = load_market_data(config);
    const std::size_t mkt = md.market();
    const auto dir = fresh_stage_dir(config, "analyze");
    const auto arr_dir = stage_dir(config, "arr");
    const auto source = config.analysis.source;

    json correlations = json::object();
    json skipped = json::array();
    for (Frequency f : config.frequencies) {
        const auto arr = indicator::read_arr_csv(arr_dir / arr_file(source, f), f, source);
        const auto grid = metrics::window_grid(md.base, f);
        const auto fname = std::string(metrics::frequency_name(f));
        std::vector<std::pair<std::string, metrics::RiskSeries>> risks;
        risks.emplace_back("returns", column_series(metrics::log_returns(md.ticks, f), mkt, metrics::SeriesKind::ret));
        risks.emplace_back("log_rv", metrics::log_realized_volatility(md.base, mkt, grid));
        risks.emplace_back("drawdown", drawdown_series(md, mkt, grid));
        for (const auto& [metric, risk] : risks) {
            const auto tag = metric + "_" + fname;
            try {
                const auto al = indicator::arr_risk_alignment(arr, risk);
                std::string pairs = "timestamp,arr,value\n";
                for (std::size_t i = 0; i < al.timestamps.size(); ++i)
                    pairs += std::to_string(al.timestamps[i]) + "," + format_double(al.arr[i]) + "," +
                             format_double(al.risk[i]) + "\n";
                write_file(dir / ("pairs_" + tag + ".csv"), pairs);
                correlations[metric][fname] = {{"spearman", al.spearman}, {"n", al.timestamps.size()}};
                stats::write_kde_csv(dir / ("kde_" + tag + ".csv"),
                                     stats::kde2d(al.arr, al.risk, config.analysis.grid_size));
            } catch (const Error& e) {
                skipped.push_back({{"cell", tag}, {"reason", e.what()}});
            }
        }
    }
    nn::save_json(dir / "correlations.json", {{"source", indicator::source_name(source)}, {"spearman", correlations}});
    write_manifest(config, "analyze", dir, {{"source", indicator::source_name(source)}, {"skipped", skipped}});
}

// ------------------------------------------------------------------ forecast

std::string ForecastCell::name() const {
    return std::string(forecast::task_name(task)) + "_" + family + "_" + std::string(metrics::frequency_name(horizon));
}

forecast::FeatureSources feature_sources(const MarketData& md, const std::map<Frequency, indicator::ArrSeries>& arr) {
    forecast::FeatureSources sources;
    for (const auto& [f, series] : arr) {
        sources.log_rv[f] = metrics::log_realized_volatility(md.base, md.market(), metrics::window_grid(md.base, f));
        sources.arr[f] = series;
    }
    return sources;
}

forecast::TargetSeries forecast_target(const MarketData& md, forecast::Task task, Frequency h, const CrashConfig& crash) {
    const auto mode = h == Frequency::week1 ? metrics::WeekMode::non_overlapping : metrics::WeekMode::rolling;
    if (task == forecast::Task::regression)
        return forecast::regression_target(
            metrics::log_realized_volatility(md.base, md.market(), metrics::window_grid(md.base, h, mode)));
    const auto rets = column_series(metrics::log_returns(md.ticks, h, mode), md.market(), metrics::SeriesKind::ret);
    return forecast::classification_target(metrics::crash_labels(rets, crash.lambda, crash.threshold));
}

namespace {

forecast::Family resolve_family(const std::string& name, forecast::Task task) {
    if (name == "linear") return forecast::linear_family(task);
    return forecast::parse_family(name);
}

}  // namespace

json run_forecast_cell(const RunConfig& config, const ForecastCell& cell, const forecast::FeatureSources& sources,
                       const forecast::TargetSeries& target, std::int64_t test_start, const fs::path& dir) {
    json out{{"task", forecast::task_name(cell.task)},
             {"family", cell.family},
             {"horizon", metrics::frequency_name(cell.horizon)}};
    const auto seed = derive_seed(config.seed, kForecastStream ^ fnv1a64(cell.name()));
    const auto family = resolve_family(cell.family, cell.task);
    forecast::ForecastDataset with_arr, no_arr;
    try {
        with_arr = forecast::build_features(sources, target, cell.horizon, true, cell.task);
        no_arr = forecast::build_features(sources, target, cell.horizon, false, cell.task);
    } catch (const Error& e) {
        out["status"] = "skipped";
        out["reason"] = e.what();
        return out;
    }
    // Training rows must have their targets before the test period starts.
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < with_arr.rows(); ++i) {
        if (with_arr.target_timestamps[i] < test_start)
            train_rows.push_back(i);
        else if (with_arr.timestamps[i] >= test_start)
            test_rows.push_back(i);
    }
    auto classes_ok = [&](const std::vector<std::size_t>& rows) {
        if (cell.task == forecast::Task::regression) return true;
        std::size_t pos = 0;
        for (auto r : rows) pos += with_arr.target[r] == 1.0 ? 1 : 0;
        return pos > 0 && pos < rows.size();
    };
    if (train_rows.size() < config.forecast.min_train_rows || test_rows.size() < config.forecast.min_test_rows ||
        !classes_ok(train_rows) || !classes_ok(test_rows)) {
        out["status"] = "skipped";
        out["reason"] = "insufficient data (" + std::to_string(train_rows.size()) + " train rows, " +
                        std::to_string(test_rows.size()) + " test rows)";
        return out;
    }

    forecast::SearchOptions opts;
    opts.iterations = config.forecast.iterations;
    opts.folds = config.forecast.folds;
    opts.seed = seed;
    opts.oversample = cell.task == forecast::Task::classification;
    const auto grid = forecast::default_grid(family, cell.task);
    std::vector<double> preds[2];
    const forecast::ForecastDataset* variants[2] = {&with_arr, &no_arr};
    const char* labels[2] = {"with_arr", "no_arr"};
    const auto test = forecast::take_rows(with_arr, test_rows);
    for (int v = 0; v < 2; ++v) {
        const auto train = forecast::take_rows(*variants[v], train_rows);
        const auto result = forecast::random_search_cv(train, family, grid, opts);
        if (!dir.empty())
            forecast::write_trials_jsonl(result, dir / "trials" / (cell.name() + "_" + labels[v] + ".jsonl"));
        preds[v] = result.model->predict(forecast::take_rows(*variants[v], test_rows).features);
        out[labels[v]] = {{"cv_score", result.best_score}, {"params", forecast::to_json(result.best_params)}};
    }
    const auto metric = cell.task == forecast::Task::regression ? stats::r_squared_metric() : stats::auroc_metric();
    const auto boot = stats::paired_bootstrap(test.target, preds[0], preds[1], metric, config.forecast.bootstrap,
                                              derive_seed(seed, 1));
    out["status"] = "ok";
    out["family_model"] = forecast::family_name(family);
    out["with_arr"]["test_score"] = boot.metric_a;
    out["no_arr"]["test_score"] = boot.metric_b;
    out["p_value"] = boot.p_value;
    out["observed_diff"] = boot.observed_diff;
    out["train_rows"] = train_rows.size();
    out["test_rows"] = test_rows.size();

    if (dir.empty()) return out;
    std::string csv = "timestamp,target_timestamp,target,with_arr,no_arr\n";
    for (std::size_t i = 0; i < test.rows(); ++i)
        csv += std::to_string(test.timestamps[i]) + "," + std::to_string(test.target_timestamps[i]) + "," +
               format_double(test.target[i]) + "," + format_double(preds[0][i]) + "," + format_double(preds[1][i]) + "\n";
    write_file(dir / "predictions" / (cell.name() + ".csv"), csv);
    return out;
}

namespace {

std::string fmt_score(const json& cell, const char* variant) {
    if (cell.value("status", "") != "ok") return "";
    return format_double(cell.at(variant).at("test_score").get<double>());
}

}  // namespace

void cmd_forecast(const RunConfig& config) {
    config.validate();
    require_stage(config, "arr", "cmd_arr");
    const auto md = load_market_data(config);
    md.market();  // fail before any work when the market asset is absent
    const auto dir = fresh_stage_dir(config, "forecast");
    const auto arr_dir = stage_dir(config, "arr");
    const auto split = config.split_sessions(md.ticks.sessions());
    const std::int64_t test_start = md.ticks.calendar.sessions[split.test_first].open;
    const auto source = config.forecast.source;

    std::map<Frequency, indicator::ArrSeries> arr;
    for (Frequency f : config.frequencies) arr[f] = indicator::read_arr_csv(arr_dir / arr_file(source, f), f, source);
    const auto sources = feature_sources(md, arr);

    std::vector<ForecastCell> cells;
    std::map<std::pair<int, Frequency>, forecast::TargetSeries> targets;
    std::map<std::pair<int, Frequency>, std::string> target_errors;
    for (auto task : config.forecast.tasks)
        for (Frequency h : config.forecast.horizons) {
            const std::pair<int, Frequency> key{static_cast<int>(task), h};
            try {
                targets[key] = forecast_target(md, task, h, config.crash);
            } catch (const Error& e) {
                target_errors[key] = e.what();
            }
            for (const auto& fam : config.forecast.families) cells.push_back({task, fam, h});
        }

    fs::create_directories(dir / "trials");
    fs::create_directories(dir / "predictions");
    std::vector<json> results(cells.size());
    parallel_for(cells.size(), config.threads, [&](std::size_t i) {
        const auto& c = cells[i];
        const std::pair<int, Frequency> key{static_cast<int>(c.task), c.horizon};
        if (auto it = target_errors.find(key); it != target_errors.end()) {
            results[i] = {{"task", forecast::task_name(c.task)},
                          {"family", c.family},
                          {"horizon", metrics::frequency_name(c.horizon)},
                          {"status", "skipped"},
                          {"reason", it->second}};
            return;
        }
        results[i] = run_forecast_cell(config, c, sources, targets.at(key), test_start, dir);
    });

    json tables = json::object();
    std::string csv = "task,family,row";
    for (Frequency h : config.forecast.horizons) csv += "," + std::string(metrics::frequency_name(h));
    csv += "\n";
    for (auto task : config.forecast.tasks) {
        const std::string tname(forecast::task_name(task));
        json cells_json = json::array();
        for (const auto& fam : config.forecast.families) {
            std::string rows[3] = {tname + "," + fam + ",with_arr", tname + "," + fam + ",no_arr",
                                   tname + "," + fam + ",p_value"};
            for (Frequency h : config.forecast.horizons) {
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    if (cells[i].task != task || cells[i].family != fam || cells[i].horizon != h) continue;
                    const auto& r = results[i];
                    cells_json.push_back(r);
                    rows[0] += "," + fmt_score(r, "with_arr");
                    rows[1] += "," + fmt_score(r, "no_arr");
                    rows[2] += "," + (r.value("status", "") == "ok" ? format_double(r.at("p_value").get<double>()) : "");
                }
            }
            for (const auto& row : rows) csv += row + "\n";
        }
        tables[tname] = {{"metric", task == forecast::Task::regression ? "r2" : "auroc"}, {"cells", cells_json}};
    }
    nn::save_json(dir / "results.json", {{"source", indicator::source_name(source)}, {"tables", tables}});
    write_file(dir / "results.csv", csv);
    write_manifest(config, "forecast", dir,
                   {{"source", indicator::source_name(source)}, {"test_start", test_start}, {"cells", cells.size()}});
}

// -------------------------------------------------------------------- report

void cmd_report(const RunConfig& config) {
    const std::vector<std::pair<std::string, std::string>> stages = {
        {"data", "cmd_generate"}, {"train", "cmd_train"}, {"arr", "cmd_arr"}, {"analyze", "cmd_analyze"},
        {"forecast", "cmd_forecast"}};
    std::vector<std::string> missing;
    for (const auto& [stage, producer] : stages)
        if (!fs::exists(stage_dir(config, stage) / "manifest.json")) missing.push_back(producer + " outputs missing");
    if (!missing.empty()) {
        std::string msg = "cannot build report: ";
        for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? "; " : "") + missing[i];
        throw Error(msg);
    }
    const auto dir = fresh_stage_dir(config, "report");
    json manifests = json::object();
    for (const auto& [stage, producer] : stages) {
        auto m = nn::load_json(stage_dir(config, stage) / "manifest.json");
        m.erase("created_at");
        manifests[stage] = m;
    }
    const auto forecast_results = nn::load_json(stage_dir(config, "forecast") / "results.json");
    json report{{"config_hash", config_hash(config)},
                {"manifests", manifests},
                {"reconstruction", nn::load_json(stage_dir(config, "arr") / "reconstruction.json")},
                {"analysis", nn::load_json(stage_dir(config, "analyze") / "correlations.json")},
                {"forecasting", forecast_results.at("tables")}};
    nn::save_json(dir / "report.json", report);
    write_manifest(config, "report", dir, json::object());
}

void run_all(const RunConfig& config) {
    cmd_generate(config);
    cmd_train(config);
    cmd_arr(config);
    cmd_analyze(config);
    cmd_forecast(config);
    cmd_report(config);
}

}  // namespace arrkit::pipeline
