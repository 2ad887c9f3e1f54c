#pragma once

#include "arrkit/core/matrix.hpp"

namespace arrkit {

// Per-second reconstruction of a returns panel, all matrices T x N in raw
// return units.
struct Reconstruction {
    Matrix reconstructed;
    Matrix squared_error;   // (r - r_hat)^2
    Matrix squared_return;  // r^2
};

}  // namespace arrkit
