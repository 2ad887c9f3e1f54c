#include <gtest/gtest.h>

#include <cmath>

#include "arrkit/ae/autoencoder.hpp"
#include "arrkit/core/error.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/metrics/returns.hpp"
#include "helpers.hpp"

using namespace arrkit;
using namespace arrkit::ae;

namespace {

// One session of exactly rank-1 returns: asset a moves by loading[a] * f(t).
metrics::ReturnsPanel rank_one(std::uint64_t seed, std::size_t sessions = 1) {
    const std::vector<double> loading{1.0, 0.5, -0.8, 1.5, 0.3};
    Rng rng(seed);
    std::vector<double> lp(loading.size(), std::log(50.0));
    std::size_t last = SIZE_MAX;
    const auto p = test_util::make_panel(sessions, loading.size(), [&](std::size_t t, std::size_t a) {
        if (t != last) {
            const double f = 1e-3 * rng.normal();
            for (std::size_t i = 0; i < loading.size(); ++i) lp[i] += loading[i] * f;
            last = t;
        }
        return std::exp(lp[a]);
    });
    return metrics::log_returns(p, metrics::Frequency::second);
}

double r2(const metrics::ReturnsPanel& panel, const Reconstruction& rec) {
    double res = 0.0, tot = 0.0;
    for (std::size_t a = 0; a < panel.assets(); ++a) {
        double mean = 0.0;
        for (std::size_t t = 0; t < panel.rows(); ++t) mean += panel.returns(t, a);
        mean /= static_cast<double>(panel.rows());
        for (std::size_t t = 0; t < panel.rows(); ++t) {
            res += rec.squared_error(t, a);
            tot += (panel.returns(t, a) - mean) * (panel.returns(t, a) - mean);
        }
    }
    return 1.0 - res / tot;
}

nn::TrainConfig quick_config() {
    nn::TrainConfig c;
    c.learning_rate = 1e-2;
    c.minibatch_size = 256;
    c.max_epochs = 15;
    c.max_grad_norm = 10.0;
    c.seed = 3;
    return c;
}

}  // namespace

TEST(Architecture, DimensionRule) {
    EXPECT_EQ(architecture(11), (Dims{11, 6, 2}));
    EXPECT_EQ(architecture(5), (Dims{5, 3, 1}));
    EXPECT_EQ(architecture(3), (Dims{3, 2, 1}));
    for (std::size_t n = 5; n <= 60; ++n) {
        const auto d = architecture(n);
        EXPECT_EQ(d.k, n / 5);
        EXPECT_EQ(d.h, (n + n / 5) / 2);
        EXPECT_LE(d.k, d.h);
        EXPECT_LE(d.h, d.n);
    }
    EXPECT_THROW(AutoencoderModel::create(0), Error);
}

TEST(Autoencoder, ZeroModelEncodesAndDecodesToZero) {
    const auto m = AutoencoderModel::create(11);
    EXPECT_EQ(m.net.input_dim(), 12u);
    const std::vector<double> r(11, 0.01);
    const auto x = normalize_input(m, r, 36000);
    ASSERT_EQ(x.size(), 12u);
    EXPECT_NEAR(x[11], 36000.0 / 86400.0, 1e-15);
    const auto z = encode(m, x);
    ASSERT_EQ(z.size(), 2u);
    for (double v : z) EXPECT_EQ(v, 0.0);
    const auto out = decode(m, z);
    ASSERT_EQ(out.size(), 11u);
    for (double v : out) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(encode(m, std::vector<double>(11)), Error);
    EXPECT_THROW(decode(m, std::vector<double>(3)), Error);
}

TEST(Autoencoder, NormalizationRoundTrip) {
    auto m = AutoencoderModel::create(3);
    m.mean = {0.1, -0.2, 0.0};
    m.stddev = {2.0, 0.5, 3.0};
    const std::vector<double> r{0.7, -1.1, 4.0};
    const auto x = normalize_input(m, r, 0);
    const auto back = denormalize(m, std::span<const double>(x).first(3));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], r[i], 1e-15);
}

TEST(Reconstruct, ZeroOutputGivesSquaredReturns) {
    const auto panel = rank_one(1);
    auto m = AutoencoderModel::create(5);
    m.asset_ids = panel.asset_ids;
    const auto rec = reconstruct_series(m, panel);
    EXPECT_EQ(rec.squared_error, rec.squared_return);
    for (std::size_t t = 0; t < 10; ++t) EXPECT_EQ(rec.squared_return(t, 0), panel.returns(t, 0) * panel.returns(t, 0));
}

TEST(Reconstruct, PerfectModelHasZeroError) {
    // A constant input reconstructed through the output bias alone.
    const auto p = test_util::make_panel(1, 2, [](std::size_t t, std::size_t) { return 100.0 * std::exp(1e-3 * t); });
    const auto panel = metrics::log_returns(p, metrics::Frequency::second);
    auto m = AutoencoderModel::create(2);
    m.asset_ids = panel.asset_ids;
    const auto last = m.net.layers().size() - 1;
    m.net.bias(last)[0] = panel.returns(0, 0);
    m.net.bias(last)[1] = panel.returns(0, 1);
    const auto rec = reconstruct_series(m, panel);
    for (double v : rec.squared_error.flat()) EXPECT_NEAR(v, 0.0, 1e-24);
}

TEST(Reconstruct, UniverseMismatch) {
    const auto panel = rank_one(1);
    auto m = AutoencoderModel::create(4);
    EXPECT_THROW(reconstruct_series(m, panel), Error);
    auto n = AutoencoderModel::create(5);
    n.asset_ids = {"a", "b", "c", "d", "e"};
    EXPECT_THROW(reconstruct_series(n, panel), Error);
}

TEST(Training, RankOneDataIsRecovered) {
    const auto train = rank_one(2), val = rank_one(3);
    const auto res = train_autoencoder(train, val, quick_config());
    EXPECT_EQ(res.train_curve.size(), res.val_curve.size());
    EXPECT_GT(r2(val, reconstruct_series(res.model, val)), 0.99);
}

TEST(Training, DeterministicAndDropoutOrdering) {
    const auto train = rank_one(4), val = rank_one(5);
    auto c = quick_config();
    c.max_epochs = 4;
    const auto a = train_autoencoder(train, val, c);
    const auto b = train_autoencoder(train, val, c);
    EXPECT_EQ(a.best_val_loss, b.best_val_loss);
    EXPECT_EQ(a.model, b.model);
    c.dropout_rate = 0.99;
    EXPECT_GE(train_autoencoder(train, val, c).best_val_loss, a.best_val_loss);
}

TEST(Search, SinglePointGridAndBudget) {
    const auto train = rank_one(6), val = rank_one(7);
    SearchGrid g;
    g.dropout_rate = {0.2};
    g.l1_weight = {0.01};
    g.minibatch_size = {1024};
    g.learning_rate = {1e-2};
    g.max_grad_norm = {1.0};
    g.max_epochs = 2;
    const auto res = random_search_ae(train, val, g, 3, 9);
    ASSERT_EQ(res.trials.size(), 3u);
    EXPECT_EQ(res.best_config.dropout_rate, 0.2);
    EXPECT_EQ(res.best_config.l1_weight, 0.01);
    EXPECT_EQ(res.best_config.minibatch_size, 1024u);
    EXPECT_EQ(res.best_config.max_epochs, 2u);
    double best = res.trials[0].val_loss;
    for (const auto& t : res.trials) best = std::min(best, t.val_loss);
    EXPECT_EQ(res.best_val_loss, best);
    EXPECT_EQ(res.trials[res.best_trial].val_loss, best);
}

TEST(Search, RejectsEmptyGrid) {
    SearchGrid g;
    g.learning_rate.clear();
    EXPECT_THROW(g.validate(), Error);
}

TEST(Autoencoder, JsonRoundTrip) {
    const auto train = rank_one(8), val = rank_one(9);
    auto c = quick_config();
    c.max_epochs = 1;
    const auto m = train_autoencoder(train, val, c).model;
    const auto back = autoencoder_from_json(nlohmann::json::parse(to_json(m).dump()));
    EXPECT_EQ(back, m);
    auto bad = to_json(m);
    bad["dims"]["k"] = 3;
    EXPECT_THROW(autoencoder_from_json(bad), Error);
    EXPECT_EQ(train_config_from_json(to_json(c)), c);
}
