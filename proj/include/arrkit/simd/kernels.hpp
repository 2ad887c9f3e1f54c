#pragma once

// Data-parallel inner loops shared by the network, aggregation and KDE code.
// Every kernel has a scalar reference; AVX2+FMA variants are selected at
// runtime when the CPU supports them. Set ARRKIT_SIMD=scalar to force the
// reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace arrkit::simd {

struct KernelTable {
    std::string_view name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*add_scalar)(double c, double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    // sum of (a - b)^2
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
    void (*exp)(const double* x, double* out, std::size_t n);
    // in-place activations
    void (*elu)(double* x, std::size_t n);
    void (*relu)(double* x, std::size_t n);
    // g *= f'(x), with f' recovered from the activation output y
    void (*elu_grad)(const double* y, double* g, std::size_t n);
    void (*relu_grad)(const double* y, double* g, std::size_t n);
    // out = exp(-0.5 * ((x - center) * inv_h)^2)
    void (*gauss)(const double* x, double center, double inv_h, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when not compiled in or unsupported by the running CPU.
const KernelTable* avx2_kernels();

// Selected once on first use.
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), y.size());
}
inline void add_scalar(double c, std::span<double> y) { active().add_scalar(c, y.data(), y.size()); }
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double sum_sq(std::span<const double> x) { return active().sum_sq(x.data(), x.size()); }
inline double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    return active().sum_sq_diff(a.data(), b.data(), a.size());
}
inline void exp(std::span<const double> x, std::span<double> out) {
    active().exp(x.data(), out.data(), x.size());
}
inline void elu(std::span<double> x) { active().elu(x.data(), x.size()); }
inline void relu(std::span<double> x) { active().relu(x.data(), x.size()); }
inline void elu_grad(std::span<const double> y, std::span<double> g) {
    active().elu_grad(y.data(), g.data(), g.size());
}
inline void relu_grad(std::span<const double> y, std::span<double> g) {
    active().relu_grad(y.data(), g.data(), g.size());
}
inline void gauss(std::span<const double> x, double center, double inv_h, std::span<double> out) {
    active().gauss(x.data(), center, inv_h, out.data(), x.size());
}

}  // namespace arrkit::simd
