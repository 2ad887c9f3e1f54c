#include "arrkit/nn/training.hpp"

#include <algorithm>
#include <cmath>

#include "arrkit/core/error.hpp"
#include "arrkit/simd/kernels.hpp"

namespace arrkit::nn {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw Error("learning_rate must be positive");
    if (minibatch_size == 0) throw Error("minibatch_size must be positive");
    if (max_epochs == 0) throw Error("max_epochs must be positive");
    if (!(max_grad_norm > 0.0)) throw Error("max_grad_norm must be positive");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) throw Error("dropout_rate must be in [0, 1)");
    if (l1_weight < 0.0) throw Error("l1_weight must be non-negative");
    if (early_stop_patience == 0) throw Error("early_stop_patience must be positive");
}

double clip_global_norm(std::span<double> gradient, double max_norm) {
    if (!(max_norm > 0.0)) throw Error("max_norm must be positive");
    const double norm = std::sqrt(simd::sum_sq(gradient));
    if (norm > max_norm) {
        const double scale = max_norm / norm;
        for (double& g : gradient) g *= scale;
    }
    return norm;
}

void optimizer_step(AdamState& state, std::span<double> params, std::span<const double> gradient, double learning_rate) {
    if (params.size() != gradient.size()) throw Error("optimizer_step: shape mismatch");
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (state.m.size() != params.size()) throw Error("optimizer_step: state shape mismatch");
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = gradient[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double update = learning_rate * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + state.epsilon);
        if (!std::isfinite(update)) throw TrainingError("non-finite optimizer update");
        params[i] -= update;
    }
}

std::vector<double> numeric_gradient(const DenseNet& net, const Matrix& batch, const Matrix& target,
                                     const LossSpec& spec, double epsilon, const Matrix* input_mask) {
    DenseNet probe = net;
    auto p = probe.params();
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double saved = p[i];
        p[i] = saved + epsilon;
        const double up = loss(probe, batch, target, spec, input_mask);
        p[i] = saved - epsilon;
        const double down = loss(probe, batch, target, spec, input_mask);
        p[i] = saved;
        out[i] = (up - down) / (2.0 * epsilon);
    }
    return out;
}

double max_relative_error(std::span<const double> analytic, std::span<const double> numeric) {
    if (analytic.size() != numeric.size()) throw Error("max_relative_error: size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-12});
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
    }
    return worst;
}

double gradient_check(const DenseNet& net, const Matrix& batch, const Matrix& target, const LossSpec& spec,
                      double epsilon, const Matrix* input_mask) {
    const auto analytic = backward(net, batch, target, spec, input_mask).gradient;
    const auto numeric = numeric_gradient(net, batch, target, spec, epsilon, input_mask);
    return max_relative_error(analytic, numeric);
}

}  // namespace arrkit::nn
