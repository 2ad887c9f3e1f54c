#include "arrkit/nn/dense_net.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arrkit/core/error.hpp"
#include "arrkit/simd/kernels.hpp"

namespace arrkit::nn {

std::string_view activation_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::elu: return "elu";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
    }
    return "?";
}

Activation parse_activation(std::string_view name) {
    for (auto a : {Activation::identity, Activation::elu, Activation::relu, Activation::sigmoid})
        if (activation_name(a) == name) return a;
    throw DataError("unknown activation '" + std::string(name) + "'");
}

DenseNet::DenseNet(std::size_t input_dim, const std::vector<LayerSpec>& layers) : input_dim_(input_dim) {
    if (input_dim == 0) throw Error("DenseNet: input dimension must be positive");
    std::size_t in = input_dim;
    std::size_t offset = 0;
    for (const auto& spec : layers) {
        if (spec.out == 0) throw Error("DenseNet: layer width must be positive");
        LayerShape s{in, spec.out, spec.activation, offset, offset + in * spec.out};
        offset = s.bias_offset + spec.out;
        layers_.push_back(s);
        in = spec.out;
    }
    params_.assign(offset, 0.0);
}

void DenseNet::init_glorot(Rng& rng) {
    for (const auto& s : layers_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
        for (std::size_t i = 0; i < s.in * s.out; ++i) params_[s.weight_offset + i] = rng.uniform(-limit, limit);
        for (std::size_t j = 0; j < s.out; ++j) params_[s.bias_offset + j] = 0.0;
    }
}

void DenseNet::validate() const {
    for (double p : params_)
        if (!std::isfinite(p)) throw TrainingError("network has non-finite parameters");
}

Matrix dropout_mask(std::size_t rows, std::size_t cols, double rate, Rng& rng) {
    if (rate < 0.0 || rate >= 1.0) throw Error("dropout rate must be in [0, 1)");
    Matrix m(rows, cols, 1.0);
    if (rate == 0.0) return m;
    const double keep_scale = 1.0 / (1.0 - rate);
    for (double& v : m.flat()) v = rng.uniform() < rate ? 0.0 : keep_scale;
    return m;
}

namespace {

void apply_activation(Activation a, std::span<double> x) {
    switch (a) {
        case Activation::identity: break;
        case Activation::elu: simd::elu(x); break;
        case Activation::relu: simd::relu(x); break;
        case Activation::sigmoid:
            for (double& v : x) v = 1.0 / (1.0 + std::exp(-v));
            break;
    }
}

// g *= act'(pre), expressed through the activation output y.
void apply_activation_grad(Activation a, std::span<const double> y, std::span<double> g) {
    switch (a) {
        case Activation::identity: break;
        case Activation::elu: simd::elu_grad(y, g); break;
        case Activation::relu: simd::relu_grad(y, g); break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < g.size(); ++i) g[i] *= y[i] * (1.0 - y[i]);
            break;
    }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_dims(const DenseNet& net, const Matrix& batch, const Matrix* mask) {
    if (batch.rows() != net.input_dim())
        throw Error("forward: batch has " + std::to_string(batch.rows()) + " features, network expects " +
                    std::to_string(net.input_dim()));
    if (mask && (mask->rows() != batch.rows() || mask->cols() != batch.cols()))
        throw Error("forward: dropout mask shape mismatch");
}

}  // namespace

ForwardPass forward(const DenseNet& net, const Matrix& batch, const Matrix* input_mask) {
    check_dims(net, batch, input_mask);
    const std::size_t n = batch.cols();
    ForwardPass fp;
    fp.values.reserve(net.layers().size() + 1);
    fp.values.push_back(batch);
    if (input_mask) {
        auto x = fp.values[0].flat();
        const auto m = input_mask->flat();
        for (std::size_t i = 0; i < x.size(); ++i) x[i] *= m[i];
    }
    const auto params = net.params();
    for (const auto& s : net.layers()) {
        const Matrix& in = fp.values.back();
        Matrix out(s.out, n);
        for (std::size_t j = 0; j < s.out; ++j) {
            auto dst = out.row(j);
            std::fill(dst.begin(), dst.end(), params[s.bias_offset + j]);
            const double* w = params.data() + s.weight_offset + j * s.in;
            for (std::size_t i = 0; i < s.in; ++i) simd::axpy(w[i], in.row(i), dst);
        }
        apply_activation(s.activation, out.flat());
        fp.values.push_back(std::move(out));
    }
    return fp;
}

Matrix predict(const DenseNet& net, const Matrix& batch) { return std::move(forward(net, batch).values.back()); }

namespace {

struct LossParts {
    double data = 0.0;
    double l1 = 0.0;
};

LossParts evaluate_loss(const DenseNet& net, const ForwardPass& fp, const Matrix& target, const LossSpec& spec) {
    const Matrix& y = fp.output();
    if (target.rows() != y.rows() || target.cols() != y.cols()) throw Error("loss: target shape mismatch");
    const double count = static_cast<double>(y.size());
    LossParts parts;
    if (spec.kind == LossKind::bce) {
        if (net.layers().back().activation != Activation::sigmoid)
            throw Error("binary cross-entropy requires a sigmoid output layer");
        constexpr double tiny = 1e-300;
        double acc = 0.0;
        const auto yf = y.flat();
        const auto tf = target.flat();
        for (std::size_t i = 0; i < yf.size(); ++i)
            acc -= tf[i] * std::log(std::max(yf[i], tiny)) + (1.0 - tf[i]) * std::log(std::max(1.0 - yf[i], tiny));
        parts.data = acc / count;
    } else {
        parts.data = simd::sum_sq_diff(y.flat(), target.flat()) / count;
    }
    if (spec.kind == LossKind::mse_l1 && spec.l1_weight != 0.0) {
        if (spec.l1_layer >= net.layers().size()) throw Error("loss: L1 layer index out of range");
        double acc = 0.0;
        for (double v : fp.values[spec.l1_layer + 1].flat()) acc += std::abs(v);
        parts.l1 = spec.l1_weight * acc / static_cast<double>(y.cols());
    }
    return parts;
}

}  // namespace

double loss(const DenseNet& net, const Matrix& batch, const Matrix& target, const LossSpec& spec,
            const Matrix* input_mask) {
    const auto fp = forward(net, batch, input_mask);
    const auto parts = evaluate_loss(net, fp, target, spec);
    return parts.data + parts.l1;
}

LossGradient backward(const DenseNet& net, const Matrix& batch, const Matrix& target, const LossSpec& spec,
                      const Matrix* input_mask) {
    const auto fp = forward(net, batch, input_mask);
    const auto parts = evaluate_loss(net, fp, target, spec);
    LossGradient out;
    out.data_loss = parts.data;
    out.loss = parts.data + parts.l1;
    if (!std::isfinite(out.loss)) throw TrainingError("non-finite loss");
    out.gradient.assign(net.parameter_count(), 0.0);

    const auto layers = net.layers();
    const auto params = net.params();
    const std::size_t n = batch.cols();
    const Matrix& y = fp.output();
    const double count = static_cast<double>(y.size());
    const bool use_l1 = spec.kind == LossKind::mse_l1 && spec.l1_weight != 0.0;
    const double l1_scale = use_l1 ? spec.l1_weight / static_cast<double>(n) : 0.0;

    // delta = dL / d(pre-activation) of the current layer.
    Matrix delta(y.rows(), n);
    {
        auto d = delta.flat();
        const auto yf = y.flat();
        const auto tf = target.flat();
        if (spec.kind == LossKind::bce) {
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = (yf[i] - tf[i]) / count;
        } else {
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = 2.0 * (yf[i] - tf[i]) / count;
            if (use_l1 && spec.l1_layer + 1 == layers.size())
                for (std::size_t i = 0; i < d.size(); ++i) d[i] += l1_scale * sign(yf[i]);
            apply_activation_grad(layers.back().activation, yf, d);
        }
    }

    for (std::size_t l = layers.size(); l-- > 0;) {
        const auto& s = layers[l];
        const Matrix& in = fp.values[l];
        for (std::size_t j = 0; j < s.out; ++j) {
            const auto dj = delta.row(j);
            for (std::size_t i = 0; i < s.in; ++i) out.gradient[s.weight_offset + j * s.in + i] = simd::dot(dj, in.row(i));
            out.gradient[s.bias_offset + j] = simd::sum(dj);
        }
        if (l == 0) break;
        Matrix prev(s.in, n);
        for (std::size_t j = 0; j < s.out; ++j) {
            const double* w = params.data() + s.weight_offset + j * s.in;
            const auto dj = delta.row(j);
            for (std::size_t i = 0; i < s.in; ++i) simd::axpy(w[i], dj, prev.row(i));
        }
        if (use_l1 && spec.l1_layer + 1 == l) {
            auto p = prev.flat();
            const auto h = in.flat();
            for (std::size_t i = 0; i < p.size(); ++i) p[i] += l1_scale * sign(h[i]);
        }
        apply_activation_grad(layers[l - 1].activation, in.flat(), prev.flat());
        delta = std::move(prev);
    }
    return out;
}

}  // namespace arrkit::nn
