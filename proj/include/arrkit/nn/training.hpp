#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "arrkit/nn/dense_net.hpp"

namespace arrkit::nn {

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t minibatch_size = 512;
    std::size_t max_epochs = 100;
    double max_grad_norm = 1.0;
    double dropout_rate = 0.0;
    double l1_weight = 0.0;
    std::size_t early_stop_patience = 5;
    std::uint64_t seed = 0;

    void validate() const;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Scales g to norm max_norm when its L2 norm exceeds it. Returns the norm
// before clipping.
double clip_global_norm(std::span<double> gradient, double max_norm);

// Adam with bias correction.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t step = 0;
    std::vector<double> m;
    std::vector<double> v;
};

void optimizer_step(AdamState& state, std::span<double> params, std::span<const double> gradient, double learning_rate);

// Central differences of the full loss with respect to every parameter.
std::vector<double> numeric_gradient(const DenseNet& net, const Matrix& batch, const Matrix& target,
                                     const LossSpec& spec, double epsilon, const Matrix* input_mask = nullptr);

// max_i |a_i - n_i| / max(|a_i|, |n_i|, 1e-12)
double max_relative_error(std::span<const double> analytic, std::span<const double> numeric);

double gradient_check(const DenseNet& net, const Matrix& batch, const Matrix& target, const LossSpec& spec,
                      double epsilon = 1e-5, const Matrix* input_mask = nullptr);

}  // namespace arrkit::nn
