#include <gtest/gtest.h>

#include <cmath>

#include "arrkit/core/random.hpp"
#include "arrkit/indicator/arr.hpp"
#include "arrkit/market/synthetic.hpp"
#include "arrkit/metrics/risk.hpp"
#include "arrkit/pca/pca.hpp"
#include "arrkit/stats/metrics.hpp"
#include "helpers.hpp"

using namespace arrkit;
using namespace arrkit::indicator;
using metrics::Frequency;

namespace {

metrics::ReturnsPanel noisy_base(std::size_t sessions, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> lp(3, std::log(100.0));
    std::size_t last = SIZE_MAX;
    const auto p = test_util::make_panel(sessions, 3, [&](std::size_t t, std::size_t a) {
        if (t != last) {
            const double f = rng.normal();
            for (auto& v : lp) v += 1e-4 * (f + 0.5 * rng.normal());
            last = t;
        }
        return std::exp(lp[a]);
    });
    return metrics::log_returns(p, Frequency::second);
}

Reconstruction scaled_reconstruction(const metrics::ReturnsPanel& base, double factor) {
    Reconstruction r;
    r.reconstructed = base.returns;
    for (auto& v : r.reconstructed.flat()) v *= factor;
    r.squared_error = Matrix(base.rows(), base.assets());
    r.squared_return = Matrix(base.rows(), base.assets());
    for (std::size_t i = 0; i < base.returns.size(); ++i) {
        const double x = base.returns.flat()[i];
        r.squared_error.flat()[i] = (x - r.reconstructed.flat()[i]) * (x - r.reconstructed.flat()[i]);
        r.squared_return.flat()[i] = x * x;
    }
    return r;
}

ArrSeries series_of(const std::vector<double>& v) {
    ArrSeries s;
    for (std::size_t i = 0; i < v.size(); ++i) s.timestamps.push_back(static_cast<std::int64_t>(i));
    s.values = v;
    return s;
}

}  // namespace

TEST(Arr, PerfectAndZeroReconstruction) {
    const auto base = noisy_base(2, 1);
    for (auto f : {Frequency::min5, Frequency::hour1, Frequency::day1}) {
        const auto perfect = compute_arr(scaled_reconstruction(base, 1.0), base, f, Source::pca);
        const auto zero = compute_arr(scaled_reconstruction(base, 0.0), base, f, Source::pca);
        ASSERT_GT(perfect.size(), 0u);
        for (double v : perfect.values) EXPECT_EQ(v, 0.0);
        for (double v : zero.values) EXPECT_EQ(v, 1.0);
    }
    EXPECT_EQ(compute_arr(scaled_reconstruction(base, 0.0), base, Frequency::day1, Source::pca).size(), 2u);
}

TEST(Arr, ZeroDenominatorWindowsAreDropped) {
    const auto p = test_util::make_panel(1, 2, [](std::size_t t, std::size_t) { return t < 400 ? 100.0 : 101.0; });
    const auto base = metrics::log_returns(p, Frequency::second);
    const auto s = compute_arr(scaled_reconstruction(base, 0.0), base, Frequency::min5, Source::pca);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.timestamps[0], p.calendar.sessions[0].open + 600);
}

TEST(Arr, HalfDaysNeverAppear) {
    const Date half(2013, 1, 3);
    auto c = test_util::small_synthetic(3, 2);
    c.n_assets = 4;
    c.half_days = {half};
    const auto base = metrics::log_returns(market::generate_synthetic_market(c), Frequency::second);
    const auto daily = compute_arr(scaled_reconstruction(base, 0.5), base, Frequency::day1, Source::pca);
    ASSERT_EQ(daily.size(), 3u);
    for (auto ts : daily.timestamps) EXPECT_NE(date_of(ts), half);
    for (auto ts : base.timestamps) ASSERT_NE(date_of(ts), half);
}

TEST(Arr, PcaSourceIsScaleInvariant) {
    const auto base = noisy_base(2, 2);
    auto scaled = base;
    for (auto& v : scaled.returns.flat()) v *= 37.0;
    const auto a = compute_arr(pca::pca_reconstruct(pca::fit_pca(base, 1), base), base, Frequency::hour1, Source::pca);
    const auto b =
        compute_arr(pca::pca_reconstruct(pca::fit_pca(scaled, 1), scaled), scaled, Frequency::hour1, Source::pca);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-10);
}

TEST(Smoothing, ConstantSeries) {
    const auto s = smooth_arr(series_of(std::vector<double>(300, 0.4)), 78.0);
    EXPECT_TRUE(s.smoothed);
    for (double v : s.values) EXPECT_NEAR(v, 0.4, 1e-14);
}

TEST(Smoothing, StepHalvesAfterOneDay) {
    std::vector<double> v(5200, 1.0);
    for (std::size_t i = 5000; i < v.size(); ++i) v[i] = 0.0;
    const auto s = smooth_arr(series_of(v), 78.0);
    EXPECT_NEAR(s.values[5000 + 77], 0.5, 1e-6);
    EXPECT_DOUBLE_EQ(steps_per_day(Frequency::min5), 78.0);
    EXPECT_DOUBLE_EQ(steps_per_day(Frequency::week1, metrics::WeekMode::non_overlapping), 0.2);
}

TEST(Alignment, MonotoneDecreasingRisk) {
    Rng rng(3);
    std::vector<double> v(200);
    for (auto& x : v) x = rng.uniform();
    metrics::RiskSeries risk;
    for (std::size_t i = 0; i < v.size(); i += 2) {  // every other stamp only
        risk.timestamps.push_back(static_cast<std::int64_t>(i));
        risk.values.push_back(-std::pow(v[i], 3.0));
    }
    const auto a = arr_risk_alignment(series_of(v), risk);
    EXPECT_EQ(a.arr.size(), 100u);
    EXPECT_NEAR(a.spearman, -1.0, 1e-12);
}

TEST(Alignment, IndependentRiskIsUncorrelated) {
    Rng rng(4);
    std::vector<double> v(1000);
    metrics::RiskSeries risk;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = rng.uniform();
        risk.timestamps.push_back(static_cast<std::int64_t>(i));
        risk.values.push_back(rng.normal());
    }
    EXPECT_LT(std::abs(arr_risk_alignment(series_of(v), risk).spearman), 0.1);
}

TEST(Alignment, HighComovementRegimeHasLowerArrAndHigherVol) {
    market::SyntheticMarketConfig c;
    c.n_assets = 6;
    c.n_sessions = 4;
    c.n_factors = 1;
    c.regime_schedule = {{0, 1, 3.0, 0.5}, {2, 3, 0.5, 0.5}};
    c.seed = 5;
    const auto base = metrics::log_returns(market::generate_synthetic_market(c), Frequency::second);
    const auto sectors = metrics::select(base, 0, 3, {1, 2, 3, 4, 5});
    const auto arr =
        compute_arr(pca::pca_reconstruct(pca::fit_pca(sectors, 1), sectors), sectors, Frequency::min5, Source::pca);
    const auto rv = metrics::log_realized_volatility(base, 0, metrics::window_grid(base, Frequency::min5));
    EXPECT_LT(arr_risk_alignment(arr, rv).spearman, 0.0);
}

TEST(ArrCsv, RoundTrip) {
    const auto base = noisy_base(1, 6);
    const auto s = compute_arr(pca::pca_reconstruct(pca::fit_pca(base, 1), base), base, Frequency::min5, Source::pca);
    const auto path = test_util::temp_dir("arr_csv") / "arr.csv";
    write_arr_csv(s, path);
    const auto back = read_arr_csv(path, Frequency::min5, Source::pca);
    EXPECT_EQ(back.timestamps, s.timestamps);
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(back.values[i], s.values[i]);
}
