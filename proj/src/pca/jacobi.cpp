#include "arrkit/pca/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arrkit/core/error.hpp"

namespace arrkit::pca {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

EigenResult jacobi_eigen(const Matrix& input, double tol, std::size_t max_sweeps) {
    const std::size_t n = input.rows();
    if (n == 0 || input.cols() != n) throw Error("jacobi_eigen: matrix must be square and non-empty");
    for (double v : input.flat())
        if (!std::isfinite(v)) throw DataError("jacobi_eigen: non-finite matrix entry");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double scale = std::max({std::abs(input(i, j)), std::abs(input(j, i)), 1e-300});
            if (std::abs(input(i, j) - input(j, i)) > 1e-12 * scale + 1e-300)
                throw Error("jacobi_eigen: matrix is not symmetric");
        }

    Matrix a = input;
    Matrix v = Matrix::identity(n);
    const double norm = frobenius(a);
    const double target = tol * norm;
    EigenResult out;
    while (norm > 0.0 && off_diagonal_norm(a) > target) {
        if (out.sweeps == max_sweeps) throw Error("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");
        ++out.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.values[j] = a(src, src);
        std::size_t big = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (std::abs(v(k, src)) > std::abs(v(big, src))) big = k;
        const double sign = v(big, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = sign * v(k, src);
    }
    return out;
}

}  // namespace arrkit::pca
