#pragma once

#include <vector>

#include "arrkit/core/matrix.hpp"

namespace arrkit::pca {

struct EigenResult {
    std::vector<double> values;  // descending
    Matrix vectors;              // column j pairs with values[j]
    std::size_t sweeps = 0;
};

// Cyclic Jacobi rotations on a symmetric matrix until the off-diagonal
// Frobenius norm drops below tol * ||A||_F. Each eigenvector's
// largest-magnitude entry is made positive (first such entry on ties).
EigenResult jacobi_eigen(const Matrix& a, double tol = 1e-12, std::size_t max_sweeps = 100);

}  // namespace arrkit::pca
