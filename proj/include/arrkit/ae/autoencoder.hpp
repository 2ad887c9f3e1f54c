#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "arrkit/core/reconstruction.hpp"
#include "arrkit/metrics/returns.hpp"
#include "arrkit/nn/dense_net.hpp"
#include "arrkit/nn/training.hpp"

namespace arrkit::ae {

struct Dims {
    std::size_t n = 0;  // assets
    std::size_t h = 0;  // hidden width
    std::size_t k = 0;  // latent factors

    friend bool operator==(const Dims&, const Dims&) = default;
};

// K = max(1, floor(N / 5)), H = floor((N + K) / 2).
Dims architecture(std::size_t n_assets);

// Time-of-day enters the encoder as seconds-from-midnight / 86400.
inline constexpr double kTimeOfDayScale = 1.0 / 86400.0;

// Layer order inside the network: encoder hidden, latent, decoder hidden,
// linear output.
inline constexpr std::size_t kLatentLayer = 1;
inline constexpr std::size_t kEncoderLayers = 2;

// Deep sparse denoising autoencoder over N asset returns plus time-of-day.
// Encoder:  h2 = ELU(W4 x + b4), Z = ELU(W3 h2 + b3)
// Decoder:  h1 = ELU(W2 Z + b2), r_hat = W1 h1 + b1
// Returns are z-scored per asset with training statistics before entering
// the network; decode() maps back to raw returns.
struct AutoencoderModel {
    Dims dims;
    nn::DenseNet net;
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<std::string> asset_ids;

    // Zero-initialized network with identity normalization.
    static AutoencoderModel create(std::size_t n_assets);

    friend bool operator==(const AutoencoderModel&, const AutoencoderModel&) = default;
};

// Normalized encoder input (N + 1 entries) from raw returns.
std::vector<double> normalize_input(const AutoencoderModel& model, std::span<const double> returns,
                                    std::int64_t seconds_of_day);

std::vector<double> encode(const AutoencoderModel& model, std::span<const double> x);

// Reconstructed raw returns for a latent vector.
std::vector<double> decode(const AutoencoderModel& model, std::span<const double> z);

std::vector<double> denormalize(const AutoencoderModel& model, std::span<const double> normalized);

struct TrainResult {
    AutoencoderModel model;
    std::vector<double> train_curve;  // mean minibatch loss per epoch (with L1)
    std::vector<double> val_curve;    // validation reconstruction MSE per epoch
    double best_val_loss = 0.0;
    std::size_t best_epoch = 0;
};

// Minimizes batch-mean MSE on normalized returns + alpha * batch-mean ||Z||_1
// with masking noise on all N + 1 encoder inputs. Early stopping watches the
// validation reconstruction MSE; the best epoch's parameters are returned.
TrainResult train_autoencoder(const metrics::ReturnsPanel& train, const metrics::ReturnsPanel& val,
                              const nn::TrainConfig& config);

struct SearchGrid {
    std::vector<double> dropout_rate{0.0, 0.2, 0.4, 0.6, 0.8};
    std::vector<double> l1_weight{0.0, 0.01, 0.1, 1.0, 10.0};
    std::vector<std::size_t> minibatch_size{256, 512, 1024, 2048};
    std::vector<double> learning_rate{1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    std::vector<double> max_grad_norm{1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
    std::size_t max_epochs = 100;
    std::size_t early_stop_patience = 5;

    void validate() const;
};

struct TrialRecord {
    nn::TrainConfig config;
    bool failed = false;
    std::string error;
    std::vector<double> train_curve;
    std::vector<double> val_curve;
    double val_loss = 0.0;
    std::size_t best_epoch = 0;
};

struct AeSearchResult {
    nn::TrainConfig best_config;
    double best_val_loss = 0.0;
    std::size_t best_trial = 0;
    std::vector<TrialRecord> trials;
    AutoencoderModel best_model;
};

// Samples `iterations` configurations uniformly with replacement from the
// grid, trains each, and keeps the lowest validation loss. Failed trials are
// recorded and skipped.
AeSearchResult random_search_ae(const metrics::ReturnsPanel& train, const metrics::ReturnsPanel& val,
                                const SearchGrid& grid, std::size_t iterations, std::uint64_t seed,
                                std::size_t threads = 1);

// Inference reconstruction of every row of a 1-second panel.
Reconstruction reconstruct_series(const AutoencoderModel& model, const metrics::ReturnsPanel& panel);

nlohmann::json to_json(const AutoencoderModel& model);
AutoencoderModel autoencoder_from_json(const nlohmann::json& j);
nlohmann::json to_json(const nn::TrainConfig& config);
nn::TrainConfig train_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrialRecord& trial);

}  // namespace arrkit::ae
