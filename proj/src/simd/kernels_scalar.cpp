#include "arrkit/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace arrkit::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_scalar(double c, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += c;
}

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double sum_sq(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void vexp(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void elu(double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] <= 0.0) x[i] = std::expm1(x[i]);
    }
}

void relu(double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(x[i], 0.0);
}

void elu_grad(const double* y, double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] <= 0.0) g[i] *= y[i] + 1.0;
    }
}

void relu_grad(const double* y, double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!(y[i] > 0.0)) g[i] = 0.0;
    }
}

void gauss(const double* x, double center, double inv_h, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (x[i] - center) * inv_h;
        out[i] = std::exp(-0.5 * u * u);
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar", dot, axpy, add_scalar, sum, sum_sq, sum_sq_diff, vexp,
        elu, relu, elu_grad, relu_grad, gauss,
    };
    return table;
}

}  // namespace arrkit::simd
