#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "arrkit/core/matrix.hpp"

namespace arrkit::stats {

enum class Bandwidth { scott };

struct KdeGrid {
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    Matrix density;  // density(i, j) at (x_grid[i], y_grid[j])
    double hx = 0.0;
    double hy = 0.0;
};

// Product Gaussian kernel density on a grid_size x grid_size grid spanning
// the data range +- 3h per axis. Scott: h = sd * n^(-1/6).
KdeGrid kde2d(std::span<const double> x, std::span<const double> y, std::size_t grid_size = 100,
              Bandwidth rule = Bandwidth::scott);

// Trapezoidal integral of the density over the grid.
double grid_mass(const KdeGrid& grid);

// Long format: x,y,density
void write_kde_csv(const std::filesystem::path& path, const KdeGrid& grid);

}  // namespace arrkit::stats
