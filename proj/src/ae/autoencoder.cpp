#include "arrkit/ae/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "arrkit/core/dates.hpp"
#include "arrkit/core/error.hpp"
#include "arrkit/core/parallel.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/nn/serialize.hpp"

namespace arrkit::ae {

Dims architecture(std::size_t n_assets) {
    if (n_assets == 0) throw Error("autoencoder needs at least one asset");
    Dims d;
    d.n = n_assets;
    d.k = std::max<std::size_t>(1, n_assets / 5);
    d.h = (n_assets + d.k) / 2;
    return d;
}

namespace {

nn::DenseNet make_net(const Dims& d) {
    using nn::Activation;
    return nn::DenseNet(d.n + 1, {{d.h, Activation::elu},
                                  {d.k, Activation::elu},
                                  {d.h, Activation::elu},
                                  {d.n, Activation::identity}});
}

// Encoder half of the network as a standalone net.
nn::DenseNet encoder_net(const AutoencoderModel& m) {
    nn::DenseNet enc(m.dims.n + 1, {{m.dims.h, nn::Activation::elu}, {m.dims.k, nn::Activation::elu}});
    const auto src = m.net.params();
    const std::size_t count = enc.parameter_count();
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(count), enc.params().begin());
    return enc;
}

nn::DenseNet decoder_net(const AutoencoderModel& m) {
    nn::DenseNet dec(m.dims.k, {{m.dims.h, nn::Activation::elu}, {m.dims.n, nn::Activation::identity}});
    const auto src = m.net.params();
    const std::size_t offset = m.net.layers()[kEncoderLayers].weight_offset;
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(offset), src.end(), dec.params().begin());
    return dec;
}

Matrix column_vector(std::span<const double> v) { return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end())); }

void check_panel(const metrics::ReturnsPanel& p, const char* what) {
    if (p.interval != metrics::Frequency::second)
        throw Error(std::string(what) + " panel must hold 1-second returns");
    if (p.rows() == 0) throw Error(std::string("empty ") + what + " set");
}

// Feature-major normalized inputs (N + 1 rows) for every row of a panel.
Matrix build_inputs(const AutoencoderModel& m, const metrics::ReturnsPanel& p, std::size_t begin, std::size_t end) {
    const std::size_t n = m.dims.n;
    Matrix x(n + 1, end - begin);
    for (std::size_t t = begin; t < end; ++t) {
        const auto r = p.returns.row(t);
        for (std::size_t a = 0; a < n; ++a) x(a, t - begin) = (r[a] - m.mean[a]) / m.stddev[a];
        x(n, t - begin) = static_cast<double>(seconds_of_day(p.timestamps[t])) * kTimeOfDayScale;
    }
    return x;
}

Matrix gather_columns(const Matrix& src, std::span<const std::size_t> idx) {
    Matrix out(src.rows(), idx.size());
    for (std::size_t f = 0; f < src.rows(); ++f) {
        const auto s = src.row(f);
        auto d = out.row(f);
        for (std::size_t b = 0; b < idx.size(); ++b) d[b] = s[idx[b]];
    }
    return out;
}

// Drops the time-of-day row to obtain the reconstruction target.
Matrix target_rows(const Matrix& x, std::size_t n) { return x.slice_rows(0, n); }

constexpr std::size_t kEvalChunk = 8192;

double validation_mse(const nn::DenseNet& net, const Matrix& val_x, std::size_t n) {
    double acc = 0.0;
    const std::size_t cols = val_x.cols();
    for (std::size_t c0 = 0; c0 < cols; c0 += kEvalChunk) {
        const std::size_t c1 = std::min(cols, c0 + kEvalChunk);
        std::vector<std::size_t> idx(c1 - c0);
        std::iota(idx.begin(), idx.end(), c0);
        const Matrix batch = gather_columns(val_x, idx);
        const Matrix out = nn::predict(net, batch);
        for (std::size_t a = 0; a < n; ++a) {
            const auto y = out.row(a);
            const auto t = batch.row(a);
            for (std::size_t b = 0; b < y.size(); ++b) acc += (y[b] - t[b]) * (y[b] - t[b]);
        }
    }
    return acc / static_cast<double>(cols * n);
}

}  // namespace

AutoencoderModel AutoencoderModel::create(std::size_t n_assets) {
    AutoencoderModel m;
    m.dims = architecture(n_assets);
    m.net = make_net(m.dims);
    m.mean.assign(n_assets, 0.0);
    m.stddev.assign(n_assets, 1.0);
    return m;
}

std::vector<double> normalize_input(const AutoencoderModel& model, std::span<const double> returns,
                                    std::int64_t seconds_of_day) {
    if (returns.size() != model.dims.n)
        throw Error("normalize_input: expected " + std::to_string(model.dims.n) + " returns, got " +
                    std::to_string(returns.size()));
    std::vector<double> x(model.dims.n + 1);
    for (std::size_t a = 0; a < model.dims.n; ++a) x[a] = (returns[a] - model.mean[a]) / model.stddev[a];
    x[model.dims.n] = static_cast<double>(seconds_of_day) * kTimeOfDayScale;
    return x;
}

std::vector<double> denormalize(const AutoencoderModel& model, std::span<const double> normalized) {
    if (normalized.size() != model.dims.n) throw Error("denormalize: dimension mismatch");
    std::vector<double> r(normalized.size());
    for (std::size_t a = 0; a < r.size(); ++a) r[a] = normalized[a] * model.stddev[a] + model.mean[a];
    return r;
}

std::vector<double> encode(const AutoencoderModel& model, std::span<const double> x) {
    if (x.size() != model.dims.n + 1)
        throw Error("encode: expected " + std::to_string(model.dims.n + 1) + " inputs, got " + std::to_string(x.size()));
    return nn::predict(encoder_net(model), column_vector(x)).storage();
}

std::vector<double> decode(const AutoencoderModel& model, std::span<const double> z) {
    if (z.size() != model.dims.k)
        throw Error("decode: expected " + std::to_string(model.dims.k) + " latent values, got " + std::to_string(z.size()));
    const Matrix out = nn::predict(decoder_net(model), column_vector(z));
    return denormalize(model, out.storage());
}

TrainResult train_autoencoder(const metrics::ReturnsPanel& train, const metrics::ReturnsPanel& val,
                              const nn::TrainConfig& config) {
    config.validate();
    check_panel(train, "training");
    check_panel(val, "validation");
    const std::size_t n = train.assets();
    if (val.assets() != n) throw Error("training and validation panels have different asset counts");

    TrainResult result;
    AutoencoderModel& model = result.model;
    model = AutoencoderModel::create(n);
    model.asset_ids = train.asset_ids;
    const double rows = static_cast<double>(train.rows());
    for (std::size_t a = 0; a < n; ++a) {
        double mean = 0.0;
        for (std::size_t t = 0; t < train.rows(); ++t) mean += train.returns(t, a);
        mean /= rows;
        double var = 0.0;
        for (std::size_t t = 0; t < train.rows(); ++t) var += (train.returns(t, a) - mean) * (train.returns(t, a) - mean);
        var /= rows;
        model.mean[a] = mean;
        model.stddev[a] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    Rng init_rng(derive_seed(config.seed, 1));
    Rng shuffle_rng(derive_seed(config.seed, 2));
    Rng mask_rng(derive_seed(config.seed, 3));
    model.net.init_glorot(init_rng);

    const Matrix train_x = build_inputs(model, train, 0, train.rows());
    const Matrix val_x = build_inputs(model, val, 0, val.rows());

    const nn::LossSpec spec{nn::LossKind::mse_l1, config.l1_weight, kLatentLayer};
    nn::AdamState adam;
    std::vector<std::size_t> order(train_x.cols());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> best_params(model.net.params().begin(), model.net.params().end());
    double best = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    std::uint64_t step = 0;

    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.index(i)]);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t b0 = 0; b0 < order.size(); b0 += config.minibatch_size) {
            const std::size_t b1 = std::min(order.size(), b0 + config.minibatch_size);
            const Matrix batch = gather_columns(train_x, std::span(order).subspan(b0, b1 - b0));
            const Matrix target = target_rows(batch, n);
            ++step;
            try {
                nn::LossGradient lg;
                if (config.dropout_rate > 0.0) {
                    const Matrix mask = nn::dropout_mask(batch.rows(), batch.cols(), config.dropout_rate, mask_rng);
                    lg = nn::backward(model.net, batch, target, spec, &mask);
                } else {
                    lg = nn::backward(model.net, batch, target, spec);
                }
                nn::clip_global_norm(lg.gradient, config.max_grad_norm);
                nn::optimizer_step(adam, model.net.params(), lg.gradient, config.learning_rate);
                epoch_loss += lg.loss;
                ++batches;
            } catch (const TrainingError& e) {
                throw TrainingError(std::string(e.what()) + " at epoch " + std::to_string(epoch + 1) + ", step " +
                                    std::to_string(step));
            }
        }
        result.train_curve.push_back(epoch_loss / static_cast<double>(batches));
        const double v = validation_mse(model.net, val_x, n);
        if (!std::isfinite(v))
            throw TrainingError("non-finite validation loss at epoch " + std::to_string(epoch + 1));
        result.val_curve.push_back(v);
        if (v < best) {
            best = v;
            result.best_epoch = epoch + 1;
            std::copy(model.net.params().begin(), model.net.params().end(), best_params.begin());
            since_best = 0;
        } else if (++since_best >= config.early_stop_patience) {
            break;
        }
    }
    std::copy(best_params.begin(), best_params.end(), model.net.params().begin());
    result.best_val_loss = best;
    return result;
}

void SearchGrid::validate() const {
    if (dropout_rate.empty() || l1_weight.empty() || minibatch_size.empty() || learning_rate.empty() ||
        max_grad_norm.empty())
        throw Error("search grid has an empty dimension");
    if (max_epochs == 0 || early_stop_patience == 0) throw Error("search grid epochs and patience must be positive");
}

AeSearchResult random_search_ae(const metrics::ReturnsPanel& train, const metrics::ReturnsPanel& val,
                                const SearchGrid& grid, std::size_t iterations, std::uint64_t seed,
                                std::size_t threads) {
    grid.validate();
    if (iterations == 0) throw Error("random search needs at least one iteration");

    Rng pick(derive_seed(seed, 0));
    AeSearchResult result;
    result.trials.resize(iterations);
    for (std::size_t i = 0; i < iterations; ++i) {
        nn::TrainConfig c;
        c.dropout_rate = grid.dropout_rate[pick.index(grid.dropout_rate.size())];
        c.l1_weight = grid.l1_weight[pick.index(grid.l1_weight.size())];
        c.minibatch_size = grid.minibatch_size[pick.index(grid.minibatch_size.size())];
        c.learning_rate = grid.learning_rate[pick.index(grid.learning_rate.size())];
        c.max_grad_norm = grid.max_grad_norm[pick.index(grid.max_grad_norm.size())];
        c.max_epochs = grid.max_epochs;
        c.early_stop_patience = grid.early_stop_patience;
        c.seed = derive_seed(seed, i + 1);
        result.trials[i].config = c;
    }

    std::vector<AutoencoderModel> models(iterations);
    parallel_for(iterations, threads, [&](std::size_t i) {
        TrialRecord& trial = result.trials[i];
        try {
            auto r = train_autoencoder(train, val, trial.config);
            trial.train_curve = std::move(r.train_curve);
            trial.val_curve = std::move(r.val_curve);
            trial.val_loss = r.best_val_loss;
            trial.best_epoch = r.best_epoch;
            models[i] = std::move(r.model);
        } catch (const TrainingError& e) {
            trial.failed = true;
            trial.error = e.what();
        }
    });

    bool found = false;
    for (std::size_t i = 0; i < iterations; ++i) {
        const auto& t = result.trials[i];
        if (t.failed) continue;
        if (!found || t.val_loss < result.best_val_loss) {
            found = true;
            result.best_val_loss = t.val_loss;
            result.best_trial = i;
        }
    }
    if (!found) throw TrainingError("all " + std::to_string(iterations) + " autoencoder trials failed");
    result.best_config = result.trials[result.best_trial].config;
    result.best_model = std::move(models[result.best_trial]);
    return result;
}

Reconstruction reconstruct_series(const AutoencoderModel& model, const metrics::ReturnsPanel& panel) {
    if (panel.interval != metrics::Frequency::second) throw Error("reconstruction needs a 1-second panel");
    if (panel.assets() != model.dims.n)
        throw Error("asset universe mismatch: model has " + std::to_string(model.dims.n) + " assets, panel has " +
                    std::to_string(panel.assets()));
    if (!model.asset_ids.empty() && model.asset_ids != panel.asset_ids)
        throw Error("asset universe mismatch: panel assets differ from the model's");
    const std::size_t n = model.dims.n;
    const std::size_t rows = panel.rows();
    Reconstruction out{Matrix(rows, n), Matrix(rows, n), Matrix(rows, n)};
    for (std::size_t t0 = 0; t0 < rows; t0 += kEvalChunk) {
        const std::size_t t1 = std::min(rows, t0 + kEvalChunk);
        const Matrix y = nn::predict(model.net, build_inputs(model, panel, t0, t1));
        for (std::size_t t = t0; t < t1; ++t) {
            for (std::size_t a = 0; a < n; ++a) {
                const double r = panel.returns(t, a);
                const double rh = y(a, t - t0) * model.stddev[a] + model.mean[a];
                out.reconstructed(t, a) = rh;
                out.squared_error(t, a) = (r - rh) * (r - rh);
                out.squared_return(t, a) = r * r;
            }
        }
    }
    return out;
}

nlohmann::json to_json(const AutoencoderModel& model) {
    auto j = nn::model_header("autoencoder");
    j["dims"] = {{"n", model.dims.n}, {"h", model.dims.h}, {"k", model.dims.k}};
    j["asset_ids"] = model.asset_ids;
    j["normalization"] = {{"mean", model.mean}, {"std", model.stddev}, {"time_of_day_scale", kTimeOfDayScale}};
    j["network"] = nn::net_to_json(model.net);
    return j;
}

AutoencoderModel autoencoder_from_json(const nlohmann::json& j) {
    nn::check_model_header(j, "autoencoder");
    try {
        AutoencoderModel m;
        m.dims = architecture(j.at("dims").at("n").get<std::size_t>());
        if (j.at("dims").at("h").get<std::size_t>() != m.dims.h || j.at("dims").at("k").get<std::size_t>() != m.dims.k)
            throw DataError("autoencoder: layer sizes do not match the architecture rule");
        m.asset_ids = j.at("asset_ids").get<std::vector<std::string>>();
        m.mean = j.at("normalization").at("mean").get<std::vector<double>>();
        m.stddev = j.at("normalization").at("std").get<std::vector<double>>();
        m.net = nn::net_from_json(j.at("network"));
        if (m.mean.size() != m.dims.n || m.stddev.size() != m.dims.n)
            throw DataError("autoencoder: normalization size mismatch");
        const auto ref = make_net(m.dims);
        bool same = m.net.input_dim() == ref.input_dim() && m.net.layers().size() == ref.layers().size();
        for (std::size_t l = 0; same && l < ref.layers().size(); ++l)
            same = m.net.layers()[l].out == ref.layers()[l].out &&
                   m.net.layers()[l].activation == ref.layers()[l].activation;
        if (!same) throw DataError("autoencoder: network shape does not match dims");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("autoencoder: ") + e.what());
    }
}

nlohmann::json to_json(const nn::TrainConfig& c) {
    return {{"learning_rate", c.learning_rate}, {"minibatch_size", c.minibatch_size},
            {"max_epochs", c.max_epochs},       {"max_grad_norm", c.max_grad_norm},
            {"dropout_rate", c.dropout_rate},   {"l1_weight", c.l1_weight},
            {"early_stop_patience", c.early_stop_patience}, {"seed", c.seed}};
}

nn::TrainConfig train_config_from_json(const nlohmann::json& j) {
    nn::TrainConfig c;
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.minibatch_size = j.value("minibatch_size", c.minibatch_size);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.max_grad_norm = j.value("max_grad_norm", c.max_grad_norm);
    c.dropout_rate = j.value("dropout_rate", c.dropout_rate);
    c.l1_weight = j.value("l1_weight", c.l1_weight);
    c.early_stop_patience = j.value("early_stop_patience", c.early_stop_patience);
    c.seed = j.value("seed", c.seed);
    return c;
}

nlohmann::json to_json(const TrialRecord& trial) {
    nlohmann::json j;
    j["config"] = to_json(trial.config);
    j["failed"] = trial.failed;
    if (trial.failed) j["error"] = trial.error;
    j["train_curve"] = trial.train_curve;
    j["val_curve"] = trial.val_curve;
    if (!trial.failed) {
        j["val_loss"] = trial.val_loss;
        j["best_epoch"] = trial.best_epoch;
    }
    return j;
}

}  // namespace arrkit::ae
