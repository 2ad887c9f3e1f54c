#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "arrkit/core/matrix.hpp"
#include "arrkit/core/random.hpp"

namespace arrkit::nn {

enum class Activation { identity, elu, relu, sigmoid };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

inline double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

struct LayerShape {
    std::size_t in = 0;
    std::size_t out = 0;
    Activation activation = Activation::identity;
    std::size_t weight_offset = 0;  // out x in, row-major
    std::size_t bias_offset = 0;

    friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

struct LayerSpec {
    std::size_t out = 0;
    Activation activation = Activation::identity;
};

// Stack of dense layers y = act(W x + b). All parameters live in one flat
// vector so optimizers and gradient checks can treat them uniformly.
class DenseNet {
public:
    DenseNet() = default;
    DenseNet(std::size_t input_dim, const std::vector<LayerSpec>& layers);

    std::size_t input_dim() const { return input_dim_; }
    std::size_t output_dim() const { return layers_.empty() ? input_dim_ : layers_.back().out; }
    std::span<const LayerShape> layers() const { return layers_; }
    std::size_t parameter_count() const { return params_.size(); }

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    double weight(std::size_t layer, std::size_t out, std::size_t in) const {
        const auto& s = layers_[layer];
        return params_[s.weight_offset + out * s.in + in];
    }
    double& weight(std::size_t layer, std::size_t out, std::size_t in) {
        const auto& s = layers_[layer];
        return params_[s.weight_offset + out * s.in + in];
    }
    std::span<const double> bias(std::size_t layer) const {
        return {params_.data() + layers_[layer].bias_offset, layers_[layer].out};
    }
    std::span<double> bias(std::size_t layer) { return {params_.data() + layers_[layer].bias_offset, layers_[layer].out}; }

    // Weights uniform in +-sqrt(6 / (fan_in + fan_out)); biases zero.
    void init_glorot(Rng& rng);

    // Throws when a parameter is not finite.
    void validate() const;

    friend bool operator==(const DenseNet&, const DenseNet&) = default;

private:
    std::size_t input_dim_ = 0;
    std::vector<LayerShape> layers_;
    std::vector<double> params_;
};

// Batches are feature-major: one row per feature, one column per sample.
struct ForwardPass {
    // values[0] is the (masked) input, values[l + 1] the output of layer l.
    std::vector<Matrix> values;
    const Matrix& output() const { return values.back(); }
};

// Inverted-dropout multipliers: 0 with probability `rate`, else 1 / (1 - rate).
Matrix dropout_mask(std::size_t rows, std::size_t cols, double rate, Rng& rng);

ForwardPass forward(const DenseNet& net, const Matrix& batch, const Matrix* input_mask = nullptr);

// Inference output only.
Matrix predict(const DenseNet& net, const Matrix& batch);

enum class LossKind { mse, mse_l1, bce };

struct LossSpec {
    LossKind kind = LossKind::mse;
    double l1_weight = 0.0;     // alpha for mse_l1
    std::size_t l1_layer = 0;   // layer whose output carries the L1 penalty
};

struct LossGradient {
    double loss = 0.0;
    double data_loss = 0.0;  // loss without the L1 term
    std::vector<double> gradient;
};

// MSE is averaged over every output entry of the batch; the L1 term is
// alpha * mean over samples of ||h||_1; BCE expects a sigmoid output layer.
double loss(const DenseNet& net, const Matrix& batch, const Matrix& target, const LossSpec& spec,
            const Matrix* input_mask = nullptr);

LossGradient backward(const DenseNet& net, const Matrix& batch, const Matrix& target, const LossSpec& spec,
                      const Matrix* input_mask = nullptr);

}  // namespace arrkit::nn
