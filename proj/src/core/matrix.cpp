#include "arrkit/core/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "arrkit/simd/kernels.hpp"

namespace arrkit {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) simd::axpy(a(i, k), b.row(k), dst);
    }
    return out;
}

double frobenius_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("frobenius_diff: dimension mismatch");
    return std::sqrt(simd::sum_sq_diff(a.flat(), b.flat()));
}

double frobenius(const Matrix& a) { return std::sqrt(simd::sum_sq(a.flat())); }

}  // namespace arrkit
