#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "arrkit/core/error.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/forecast/dataset.hpp"
#include "arrkit/forecast/models.hpp"
#include "arrkit/forecast/search.hpp"
#include "arrkit/stats/metrics.hpp"

using namespace arrkit;
using namespace arrkit::forecast;
using metrics::Frequency;

namespace {

constexpr std::int64_t kStart = 1'000'000'000;

std::int64_t step_of(Frequency f) {
    switch (f) {
        case Frequency::min5: return 300;
        case Frequency::hour1: return 3600;
        case Frequency::day1: return 86400;
        default: return 604800;
    }
}

FeatureSources sources(std::uint64_t seed) {
    Rng rng(seed);
    FeatureSources s;
    const std::int64_t span = 6 * 604800;
    for (auto f : metrics::kAggregationFrequencies) {
        metrics::RiskSeries rv;
        rv.kind = metrics::SeriesKind::log_rv;
        rv.interval = f;
        indicator::ArrSeries arr;
        arr.interval = f;
        arr.source = indicator::Source::pca;
        for (std::int64_t t = kStart + step_of(f); t <= kStart + span; t += step_of(f)) {
            rv.timestamps.push_back(t);
            rv.values.push_back(rng.normal());
            arr.timestamps.push_back(t);
            arr.values.push_back(rng.uniform());
        }
        s.log_rv[f] = rv;
        s.arr[f] = arr;
    }
    return s;
}

Matrix column(const std::vector<double>& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

double mse(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

}  // namespace

TEST(Features, CountsPerHorizon) {
    const auto src = sources(1);
    const auto target = regression_target(src.log_rv.at(Frequency::min5));
    EXPECT_EQ(build_features(src, target, Frequency::min5, false, Task::regression).features.cols(), 4u);
    EXPECT_EQ(build_features(src, target, Frequency::min5, true, Task::regression).features.cols(), 8u);
    EXPECT_EQ(build_features(src, target, Frequency::hour1, true, Task::regression).features.cols(), 6u);
    EXPECT_EQ(build_features(src, target, Frequency::week1, false, Task::regression).features.cols(), 1u);
    EXPECT_EQ(build_features(src, target, Frequency::week1, true, Task::regression).features.cols(), 2u);
}

TEST(Features, ArrToggleOnlyAppendsColumns) {
    const auto src = sources(2);
    const auto target = regression_target(src.log_rv.at(Frequency::hour1));
    const auto a = build_features(src, target, Frequency::hour1, false, Task::regression);
    const auto b = build_features(src, target, Frequency::hour1, true, Task::regression);
    ASSERT_EQ(a.rows(), b.rows());
    EXPECT_EQ(a.target, b.target);
    EXPECT_EQ(a.timestamps, b.timestamps);
    for (std::size_t c = 0; c < a.columns.size(); ++c) EXPECT_EQ(a.columns[c], b.columns[c]);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.features.cols(); ++c) EXPECT_EQ(a.features(r, c), b.features(r, c));
}

TEST(Features, NoLookAhead) {
    const auto src = sources(3);
    for (auto h : metrics::kAggregationFrequencies) {
        const auto d = build_features(src, regression_target(src.log_rv.at(h)), h, true, Task::regression);
        ASSERT_GT(d.rows(), 0u);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            EXPECT_LE(d.feature_timestamps[i], d.timestamps[i]);
            EXPECT_LT(d.timestamps[i], d.target_timestamps[i]);
        }
    }
}

TEST(Features, SliceByTime) {
    const auto src = sources(4);
    const auto d = build_features(src, regression_target(src.log_rv.at(Frequency::day1)), Frequency::day1, false,
                                  Task::regression);
    const auto mid = d.timestamps[d.rows() / 2];
    const auto a = slice_by_time(d, 0, mid), b = slice_by_time(d, mid, INT64_MAX);
    EXPECT_EQ(a.rows() + b.rows(), d.rows());
    EXPECT_EQ(b.timestamps.front(), mid);
}

TEST(Ridge, ExactLinearRecovery) {
    Rng rng(5);
    Matrix x(50, 3);
    std::vector<double> y(50);
    for (std::size_t i = 0; i < 50; ++i) {
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal();
        y[i] = 1.5 * x(i, 0) - 2.0 * x(i, 1) + 0.25 * x(i, 2) + 3.0;
    }
    const auto m = fit_ridge(x, y, 0.0, true);
    EXPECT_NEAR(m.coef[0], 1.5, 1e-8);
    EXPECT_NEAR(m.coef[1], -2.0, 1e-8);
    EXPECT_NEAR(m.coef[2], 0.25, 1e-8);
    EXPECT_NEAR(m.intercept, 3.0, 1e-8);
    const auto heavy = fit_ridge(x, y, 1e12, true);
    double norm = 0.0;
    for (double c : heavy.coef) norm += c * c;
    EXPECT_LT(std::sqrt(norm), 1e-6 * std::sqrt(1.5 * 1.5 + 4.0 + 0.0625));
}

TEST(Ridge, TwoPointClosedForm) {
    // Centered x = (-.5, .5), y = (-1, 1): b = 1 / (0.5 + 1), c = 1 - b / 2.
    const auto m = fit_ridge(column({0.0, 1.0}), std::vector<double>{0.0, 2.0}, 1.0, true);
    EXPECT_NEAR(m.coef[0], 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(m.intercept, 2.0 / 3.0, 1e-14);
    // Without intercept: b = sum xy / (sum x^2 + alpha) = 2 / 2.
    EXPECT_NEAR(fit_ridge(column({0.0, 1.0}), std::vector<double>{0.0, 2.0}, 1.0, false).coef[0], 1.0, 1e-14);
}

TEST(Logistic, SeparableAndPenaltyLimit) {
    std::vector<double> xs, y;
    for (int i = 0; i < 40; ++i) {
        xs.push_back(i < 20 ? -1.0 - 0.1 * i : 1.0 + 0.1 * i);
        y.push_back(i < 20 ? 0.0 : 1.0);
    }
    const auto x = column(xs);
    const auto m = fit_logistic_l1(x, y, 100.0);
    EXPECT_EQ(stats::auroc(y, m.predict(x)), 1.0);
    const auto tiny = fit_logistic_l1(x, y, 1e-6);
    EXPECT_EQ(tiny.coef[0], 0.0);
}

TEST(Logistic, NoiseFeatureIsZeroed) {
    Rng rng(6);
    Matrix x(1000, 2);
    std::vector<double> y(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-3.0 * x(i, 0))) ? 1.0 : 0.0;
    }
    const auto m = fit_logistic_l1(x, y, 0.01);
    EXPECT_GT(m.coef[0], 0.0);
    EXPECT_EQ(m.coef[1], 0.0);
    EXPECT_TRUE(m.converged);
}

TEST(Gbdt, PiecewiseConstantFit) {
    std::vector<double> xs, y;
    for (int i = 0; i < 400; ++i) {
        xs.push_back(i / 400.0);
        y.push_back(static_cast<double>(i / 100) * 0.5 - 0.7);
    }
    const auto x = column(xs);
    GbdtConfig c;
    c.num_leaves = 4;
    c.n_estimators = 50;
    c.learning_rate = 0.1;
    const auto m = fit_gbdt(x, y, Task::regression, c);
    EXPECT_LT(mse(m.predict(x), y), 1e-4);

    c.n_estimators = 0;
    const auto base = fit_gbdt(x, y, Task::regression, c);
    for (double p : base.predict(x)) EXPECT_EQ(p, base.base_score);
}

TEST(Gbdt, MonotoneFeatureTransformInvariance) {
    Rng rng(7);
    Matrix x(300, 2), z(300, 2);
    std::vector<double> y(300);
    for (std::size_t i = 0; i < 300; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y[i] = std::sin(x(i, 0)) + 0.3 * x(i, 1) + 0.1 * rng.normal();
        z(i, 0) = std::exp(x(i, 0));
        z(i, 1) = x(i, 1);
    }
    GbdtConfig c;
    c.num_leaves = 8;
    c.n_estimators = 30;
    EXPECT_EQ(fit_gbdt(x, y, Task::regression, c).predict(x), fit_gbdt(z, y, Task::regression, c).predict(z));
}

TEST(Gbdt, ClassificationProbabilities) {
    Rng rng(8);
    Matrix x(400, 1);
    std::vector<double> y(400);
    for (std::size_t i = 0; i < 400; ++i) {
        x(i, 0) = rng.normal();
        y[i] = x(i, 0) + 0.5 * rng.normal() > 0.0 ? 1.0 : 0.0;
    }
    GbdtConfig c;
    c.num_leaves = 5;
    c.n_estimators = 40;
    const auto p = fit_gbdt(x, y, Task::classification, c).predict(x);
    for (double v : p) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
    EXPECT_GT(stats::auroc(y, p), 0.85);
}

TEST(Mlp, LinearTargetAndWeightDecay) {
    Rng rng(9);
    Matrix x(500, 2);
    std::vector<double> y(500);
    for (std::size_t i = 0; i < 500; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y[i] = 2.0 * x(i, 0) - x(i, 1);
    }
    MlpConfig c;
    c.hidden = 5;
    c.alpha = 0.0;
    c.learning_rate_init = 1e-2;
    c.seed = 1;
    const auto free = fit_mlp(x, y, Task::regression, c);
    EXPECT_GT(stats::r_squared(y, free.predict(x)), 0.99);
    c.alpha = 100.0;
    const auto decayed = fit_mlp(x, y, Task::regression, c);
    auto weight_ss = [](const nn::DenseNet& net) {
        double s = 0.0;
        for (std::size_t l = 0; l < net.layers().size(); ++l)
            for (std::size_t o = 0; o < net.layers()[l].out; ++o)
                for (std::size_t i = 0; i < net.layers()[l].in; ++i) s += net.weight(l, o, i) * net.weight(l, o, i);
        return s;
    };
    EXPECT_LT(weight_ss(decayed.net), weight_ss(free.net));
}

TEST(Families, DeterministicGivenSeed) {
    Rng rng(10);
    Matrix x(200, 3);
    std::vector<double> y(200), labels(200);
    for (std::size_t i = 0; i < 200; ++i) {
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal();
        y[i] = x(i, 0) + 0.5 * rng.normal();
        labels[i] = y[i] > 0.5 ? 1.0 : 0.0;
    }
    const Params gbdt{{"learning_rate", 0.1}, {"n_estimators", 20}, {"num_leaves", 5}, {"reg_alpha", 0}, {"reg_beta", 0}};
    const Params mlp{{"hidden_layer_sizes", 5}, {"alpha", 1e-4}, {"learning_rate_init", 1e-2}, {"early_stopping", 1},
                     {"max_iter", 50}};
    for (auto task : {Task::regression, Task::classification}) {
        const auto& t = task == Task::regression ? y : labels;
        EXPECT_EQ(fit_model(Family::gbdt, task, gbdt, x, t, 3)->predict(x),
                  fit_model(Family::gbdt, task, gbdt, x, t, 3)->predict(x));
        EXPECT_EQ(fit_model(Family::mlp, task, mlp, x, t, 3)->predict(x),
                  fit_model(Family::mlp, task, mlp, x, t, 3)->predict(x));
    }
    EXPECT_THROW(default_grid(Family::ridge, Task::classification), Error);
}

TEST(Oversample, BalancesMinority) {
    std::vector<double> labels(100, 0.0);
    for (std::size_t i = 0; i < 10; ++i) labels[i * 10] = 1.0;
    const auto rows = oversample_minority(labels, 1);
    ASSERT_EQ(rows.size(), 180u);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i < 100) {
            EXPECT_EQ(rows[i], i);
        }
        pos += labels[rows[i]] == 1.0;
    }
    EXPECT_EQ(pos, 90u);
    const std::vector<double> balanced{0, 1, 0, 1};
    EXPECT_EQ(oversample_minority(balanced, 1), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Search, ContiguousFolds) {
    using F = std::vector<std::pair<std::size_t, std::size_t>>;
    EXPECT_EQ(contiguous_folds(10, 3), (F{{0, 4}, {4, 7}, {7, 10}}));
    EXPECT_EQ(contiguous_folds(9, 3), (F{{0, 3}, {3, 6}, {6, 9}}));
}

TEST(Search, SampleConfigs) {
    const Grid small{{"a", {1, 2}}, {"b", {3}}};
    const auto all = sample_configs(small, 10, 1);
    ASSERT_EQ(all.size(), 2u);
    EXPECT_EQ(all[0].at("a"), 1.0);
    const auto g = default_grid(Family::gbdt, Task::regression);
    const auto some = sample_configs(g, 200, 2);
    EXPECT_EQ(some.size(), 200u);
    std::set<Params> distinct(some.begin(), some.end());
    EXPECT_EQ(distinct.size(), 200u);
    EXPECT_EQ(sample_configs(g, 200, 2), some);
}

TEST(Search, OnePointGridWins) {
    const auto src = sources(11);
    const auto d = build_features(src, regression_target(src.log_rv.at(Frequency::hour1)), Frequency::hour1, true,
                                  Task::regression);
    const Grid grid{{"alpha", {0.5}}, {"fit_intercept", {1.0}}};
    SearchOptions o;
    o.iterations = 5;
    const auto r = random_search_cv(d, Family::ridge, grid, o);
    ASSERT_EQ(r.trials.size(), 1u);
    EXPECT_EQ(r.best_params, (Params{{"alpha", 0.5}, {"fit_intercept", 1.0}}));
    EXPECT_EQ(r.trials[0].fold_scores.size(), 3u);
    ASSERT_NE(r.model, nullptr);
}
