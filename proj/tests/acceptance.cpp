// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails. Pass criterion numbers as
// arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "arrkit/ae/autoencoder.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/core/text.hpp"
#include "arrkit/metrics/risk.hpp"
#include "arrkit/nn/serialize.hpp"
#include "arrkit/nn/training.hpp"
#include "arrkit/pca/jacobi.hpp"
#include "arrkit/pca/pca.hpp"
#include "arrkit/pipeline/pipeline.hpp"
#include "arrkit/stats/metrics.hpp"

using namespace arrkit;
namespace fs = std::filesystem;
using metrics::Frequency;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("arrkit_acceptance_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

market::SyntheticMarketConfig one_regime(market::SyntheticMarketConfig s, std::size_t sessions) {
    s.n_sessions = sessions;
    s.regime_schedule = {{0, sessions - 1, 1.0, 0.5}};
    return s;
}

// 1. Autoencoder beats PCA out of sample on curved factor data.
Outcome reconstruction_direction() {
    auto cfg = pipeline::default_config();
    cfg.seed = 11;
    cfg.synthetic = one_regime(cfg.synthetic, 20);
    cfg.synthetic.seed = 11;
    cfg.synthetic.nonlinearity = 0.5;
    cfg.synthetic.coupling_dispersion = 0.0;
    cfg.synthetic.vol_persistence = 0.0;
    cfg.synthetic.vol_of_vol = 0.0;
    cfg.synthetic.coupling_to_vol = 0.0;
    cfg.autoencoder.iterations = 20;
    cfg.bootstrap = 500;
    cfg.frequencies = {Frequency::min5};
    cfg.output_dir = scratch_dir("reconstruction");
    pipeline::cmd_generate(cfg);
    pipeline::cmd_train(cfg);
    pipeline::cmd_arr(cfg);

    const auto train = nn::load_json(pipeline::stage_dir(cfg, "train") / "manifest.json");
    const auto rec = nn::load_json(pipeline::stage_dir(cfg, "arr") / "reconstruction.json");
    const std::size_t ae_k = train.at("autoencoder").at("dims")[2].get<std::size_t>();
    const std::size_t pca_k = train.at("pca").at("k").get<std::size_t>();
    const double r2_ae = rec.at("r2").at("autoencoder").get<double>();
    const double r2_pca = rec.at("r2").at("pca").get<double>();
    const double p = rec.at("bootstrap").at("p_value").get<double>();
    const std::size_t n = rec.at("bootstrap").at("resamples").get<std::size_t>();
    fs::remove_all(cfg.output_dir);
    return {ae_k == 2 && pca_k == 2 && n == 500 && r2_ae > r2_pca && p < 0.05,
            "K=" + std::to_string(ae_k) + "/" + std::to_string(pca_k) + ", R2 ae " + fmt(r2_ae) + " vs pca " +
                fmt(r2_pca) + ", p=" + fmt(p) + " over " + std::to_string(n) + " resamples"};
}

// 2. In-sample centred PCA: session ARR equals 1 - AR.
Outcome arr_ar_duality() {
    market::SyntheticMarketConfig s;
    s.n_assets = 5;
    s.include_market = false;
    s.n_factors = 2;
    s.nonlinearity = 0.3;
    s.seed = 5;
    s = one_regime(s, 1);
    const auto ticks = market::generate_synthetic_market(s);
    auto panel = metrics::log_returns(ticks, Frequency::second);
    for (std::size_t c = 0; c < panel.assets(); ++c) {
        double m = 0.0;
        for (std::size_t r = 0; r < panel.rows(); ++r) m += panel.returns(r, c);
        m /= static_cast<double>(panel.rows());
        for (std::size_t r = 0; r < panel.rows(); ++r) panel.returns(r, c) -= m;
    }
    const auto model = pca::fit_pca(panel, ae::architecture(panel.assets()).k);
    const auto arr = indicator::compute_arr(pca::pca_reconstruct(model, panel), panel, Frequency::day1,
                                            indicator::Source::pca);
    const double gap = std::abs(arr.values.at(0) - (1.0 - pca::absorption_ratio(model)));
    return {arr.size() == 1 && gap < 1e-8,
            "K=" + std::to_string(model.k) + ", ARR " + fmt(arr.values[0]) + ", |ARR-(1-AR)|=" + fmt(gap)};
}

// 3. Backprop against central differences on small autoencoders.
Outcome gradient_correctness() {
    Rng rng(3);
    double worst = 0.0;
    int checks = 0;
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t n = inst % 2 == 0 ? 5 : 11;
        auto model = ae::AutoencoderModel::create(n);
        model.net.init_glorot(rng);
        for (auto& p : model.net.params()) p += 0.05 * rng.normal();
        const std::size_t batch = 8;
        Matrix x(n + 1, batch), y(n, batch);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t b = 0; b < batch; ++b) {
                x(i, b) = rng.normal();
                y(i, b) = x(i, b);
            }
        for (std::size_t b = 0; b < batch; ++b) x(n, b) = rng.uniform();
        nn::LossSpec spec{nn::LossKind::mse_l1, 0.01 + 0.5 * rng.uniform(), ae::kLatentLayer};
        const Matrix mask = nn::dropout_mask(n + 1, batch, 0.3, rng);
        worst = std::max(worst, nn::gradient_check(model.net, x, y, spec));
        worst = std::max(worst, nn::gradient_check(model.net, x, y, spec, 1e-5, &mask));
        checks += 2;
    }
    return {worst < 1e-4, std::to_string(checks) + " checks, max relative error " + fmt(worst)};
}

// 4. Jacobi eigendecomposition reconstructs A with orthonormal vectors.
Outcome eigensolver_fidelity() {
    Rng rng(4);
    double worst_rec = 0.0, worst_orth = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + t % 20;
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
        const auto eig = pca::jacobi_eigen(a);
        Matrix lv = eig.vectors;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) lv(i, j) *= eig.values[j];
        const Matrix rec = matmul(lv, eig.vectors.transposed());
        worst_rec = std::max(worst_rec, frobenius_diff(rec, a) / frobenius(a));
        worst_orth =
            std::max(worst_orth, frobenius_diff(matmul(eig.vectors.transposed(), eig.vectors), Matrix::identity(n)));
    }
    return {worst_rec < 1e-10 && worst_orth < 1e-10,
            "50 matrices, max rel. reconstruction " + fmt(worst_rec) + ", max orthogonality " + fmt(worst_orth)};
}

// 5. AUROC vs pair counting, R2 vs its formula, EWMA half-life.
Outcome metric_oracles() {
    Rng rng(5);
    int auroc_mismatch = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng.index(30);
        std::vector<std::uint8_t> labels(n);
        std::vector<double> scores(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<std::uint8_t>(i < 2 ? i : rng.index(2));
            scores[i] = t % 2 == 0 ? static_cast<double>(rng.index(5)) : rng.normal();
        }
        double wins = 0.0, pos = 0.0, neg = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            (labels[i] ? pos : neg) += 1.0;
            if (!labels[i]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!labels[j]) wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
        }
        if (stats::auroc(labels, scores) != wins / (pos * neg)) ++auroc_mismatch;
    }

    double r2_gap = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 5 + rng.index(500);
        std::vector<double> y(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.normal();
            p[i] = 0.7 * y[i] + 0.5 * rng.normal();
        }
        long double mean = 0.0L, ss_res = 0.0L, ss_tot = 0.0L;
        for (double v : y) mean += v;
        mean /= static_cast<long double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            ss_res += (static_cast<long double>(y[i]) - p[i]) * (static_cast<long double>(y[i]) - p[i]);
            ss_tot += (y[i] - mean) * (y[i] - mean);
        }
        r2_gap = std::max(r2_gap, std::abs(stats::r_squared(y, p) - static_cast<double>(1.0L - ss_res / ss_tot)));
    }

    // Weight of an observation `lambda` steps back relative to the current one.
    const double lambda = 10.0;
    const std::size_t len = 40;
    std::vector<double> old_impulse(len, 0.0), new_impulse(len, 0.0);
    old_impulse[len - 1 - 10] = 1.0;
    new_impulse[len - 1] = 1.0;
    const double ratio = metrics::ewm_mean(old_impulse, lambda).back() / metrics::ewm_mean(new_impulse, lambda).back();
    const double hl_gap = std::abs(ratio - 0.5);

    return {auroc_mismatch == 0 && r2_gap < 1e-12 && hl_gap < 1e-12,
            "AUROC mismatches " + std::to_string(auroc_mismatch) + "/200, R2 gap " + fmt(r2_gap) +
                ", half-life weight ratio gap " + fmt(hl_gap)};
}

// 6. Planted ARR -> future RV dependence is detected; a placebo is not.
struct ForecastRun {
    std::map<std::string, nlohmann::json> cells;
};

ForecastRun forecast_experiment(std::uint64_t seed, double coupling) {
    auto cfg = pipeline::default_config();
    cfg.seed = seed;
    cfg.synthetic = one_regime(cfg.synthetic, 40);
    cfg.synthetic.seed = seed;
    cfg.synthetic.coupling_to_vol = coupling;
    cfg.forecast.source = indicator::Source::pca;
    const auto md = pipeline::make_market_data(market::generate_synthetic_market(cfg.synthetic), cfg.market_asset);
    const auto split = cfg.split_sessions(cfg.synthetic.n_sessions);
    const auto sectors = metrics::select(md.base, 0, cfg.synthetic.n_sessions - 1, md.sector_columns);
    const auto model = pca::fit_pca(metrics::select(md.base, split.train_first, split.val_last, md.sector_columns),
                                    ae::architecture(md.sector_columns.size()).k);
    const auto rec = pca::pca_reconstruct(model, sectors);
    std::map<Frequency, indicator::ArrSeries> arr;
    for (Frequency f : cfg.frequencies) arr[f] = indicator::compute_arr(rec, sectors, f, indicator::Source::pca);
    const auto sources = pipeline::feature_sources(md, arr);
    const auto target = pipeline::forecast_target(md, forecast::Task::regression, Frequency::min5, cfg.crash);
    const auto test_start = md.ticks.calendar.sessions[split.test_first].open;
    ForecastRun run;
    for (const std::string family : {"linear", "gbdt"})
        run.cells[family] = pipeline::run_forecast_cell(cfg, {forecast::Task::regression, family, Frequency::min5},
                                                        sources, target, test_start, {});
    return run;
}

bool significant(const nlohmann::json& cell) {
    return cell.at("status") == "ok" && cell.at("with_arr").at("test_score").get<double>() >
                                            cell.at("no_arr").at("test_score").get<double>() &&
           cell.at("p_value").get<double>() < 0.05;
}

Outcome forecasting_property() {
    std::ostringstream detail;
    bool pass = true;
    const auto planted = forecast_experiment(600, 0.5);
    for (const auto& [family, cell] : planted.cells) {
        if (cell.at("status") != "ok") {
            detail << family << " skipped; ";
            pass = false;
            continue;
        }
        detail << family << " planted R2 " << fmt(cell["with_arr"]["test_score"].get<double>()) << " vs "
               << fmt(cell["no_arr"]["test_score"].get<double>()) << " p=" << fmt(cell["p_value"].get<double>())
               << "; ";
        pass = pass && significant(cell);
    }
    std::map<std::string, int> false_positives;
    const int reps = 10;
    for (int r = 0; r < reps; ++r) {
        const auto placebo = forecast_experiment(700 + static_cast<std::uint64_t>(r), 0.0);
        for (const auto& [family, cell] : placebo.cells) {
            if (cell.at("status") != "ok") pass = false;
            false_positives[family] += significant(cell) ? 1 : 0;
        }
    }
    for (const auto& [family, count] : false_positives) {
        detail << family << " placebo significant " << count << "/" << reps << "; ";
        pass = pass && (reps - count) * 10 >= reps * 9;
    }
    auto text = detail.str();
    text.resize(text.size() - 2);
    return {pass, text};
}

// 7. Crash label frequency on Gaussian daily returns.
Outcome crash_frequency() {
    Rng rng(7);
    metrics::RiskSeries daily;
    daily.interval = Frequency::day1;
    for (std::int64_t t = 0; t < 20000; ++t) {
        daily.timestamps.push_back(t * 86400);
        daily.values.push_back(0.01 * rng.normal());
    }
    const auto labels = metrics::crash_labels(daily, 10.0, -1.5);
    double hits = 0.0;
    for (auto l : labels.labels) hits += l;
    const double freq = hits / static_cast<double>(labels.labels.size());
    return {freq >= 0.037 && freq <= 0.097,
            "crash frequency " + fmt(100.0 * freq) + "% over " + std::to_string(labels.labels.size()) + " days"};
}

// 8. Two full pipeline runs produce identical artifacts.
std::map<std::string, std::string> artifact_digest(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), root).generic_string();
        if (e.path().filename() == "manifest.json") {
            auto m = nn::load_json(e.path());
            m.erase("created_at");
            out[rel] = m.dump();
        } else {
            out[rel] = hex64(fnv1a64(read_file(e.path())));
        }
    }
    return out;
}

Outcome determinism() {
    auto cfg = pipeline::default_config();
    cfg.seed = 8;
    cfg.synthetic = one_regime(cfg.synthetic, 12);
    cfg.synthetic.seed = 8;
    cfg.autoencoder.iterations = 2;
    cfg.autoencoder.grid.max_epochs = 3;
    cfg.forecast.iterations = 3;
    cfg.forecast.bootstrap = 50;
    cfg.forecast.min_train_rows = 10;
    cfg.forecast.min_test_rows = 5;
    cfg.bootstrap = 50;
    std::vector<std::map<std::string, std::string>> digests;
    for (std::size_t threads : {1, 3}) {
        cfg.threads = threads;
        cfg.output_dir = scratch_dir("determinism_" + std::to_string(threads));
        pipeline::run_all(cfg);
        digests.push_back(artifact_digest(cfg.output_dir));
        fs::remove_all(cfg.output_dir);
    }
    std::size_t differing = 0;
    for (const auto& [name, digest] : digests[0]) {
        const auto it = digests[1].find(name);
        differing += it == digests[1].end() || it->second != digest ? 1 : 0;
    }
    differing += digests[1].size() > digests[0].size() ? digests[1].size() - digests[0].size() : 0;
    return {differing == 0 && !digests[0].empty(), std::to_string(digests[0].size()) + " files compared (threads 1 vs 3), " +
                                                       std::to_string(differing) + " differ"};
}

// 9. Coarse ARR and RV are sums over their 5-minute constituents.
Outcome reaggregation() {
    auto s = one_regime(pipeline::default_config().synthetic, 7);
    s.seed = 9;
    const auto md = pipeline::make_market_data(market::generate_synthetic_market(s), "CRSPTMT");
    const auto sectors = metrics::select(md.base, 0, s.n_sessions - 1, md.sector_columns);
    const auto model = pca::fit_pca(sectors, 2);
    const auto rec = pca::pca_reconstruct(model, sectors);
    const auto fine = indicator::compute_arr(rec, sectors, Frequency::min5, indicator::Source::pca);
    const auto fine_grid = metrics::window_grid(md.base, Frequency::min5);
    const auto fine_rv = metrics::realized_variance(md.base, md.market(), fine_grid);

    double arr_gap = 0.0;
    std::size_t rv_mismatch = 0, windows = 0;
    for (auto [f, span] : {std::pair{Frequency::hour1, std::int64_t{3600}}, std::pair{Frequency::day1, std::int64_t{23400}}}) {
        const auto coarse = indicator::compute_arr(rec, sectors, f, indicator::Source::pca);
        for (std::size_t w = 0; w < coarse.size(); ++w) {
            const auto t = coarse.timestamps[w];
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < fine.size(); ++i)
                if (fine.timestamps[i] > t - span && fine.timestamps[i] <= t) {
                    num += fine.numerators[i];
                    den += fine.denominators[i];
                }
            arr_gap = std::max(arr_gap, std::abs(coarse.values[w] - num / den));
        }
        const auto grid = metrics::window_grid(md.base, f);
        const auto rv = metrics::realized_variance(md.base, md.market(), grid);
        for (std::size_t w = 0; w < grid.stamps.size(); ++w) {
            double sum = 0.0;
            for (std::size_t i = 0; i < fine_grid.stamps.size(); ++i)
                if (fine_grid.stamps[i] > grid.stamps[w] - span && fine_grid.stamps[i] <= grid.stamps[w]) sum += fine_rv[i];
            rv_mismatch += sum == rv[w] ? 0 : 1;
            ++windows;
        }
    }
    return {arr_gap < 1e-12 && rv_mismatch == 0,
            "max ARR gap " + fmt(arr_gap) + ", RV mismatches " + std::to_string(rv_mismatch) + "/" +
                std::to_string(windows)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"reconstruction direction", reconstruction_direction},
        {"ARR/AR duality", arr_ar_duality},
        {"gradient correctness", gradient_correctness},
        {"eigensolver fidelity", eigensolver_fidelity},
        {"metric oracles", metric_oracles},
        {"forecasting property", forecasting_property},
        {"crash frequency", crash_frequency},
        {"determinism", determinism},
        {"re-aggregation", reaggregation},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << " ("
                  << o.detail << ") [" << fmt(secs) << "s]" << std::endl;
    }
    fs::remove_all(fs::temp_directory_path() / ("arrkit_acceptance_" + std::to_string(::getpid())));
    return failures == 0 ? 0 : 1;
}
