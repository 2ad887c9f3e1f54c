#include "arrkit/stats/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"
#include "arrkit/simd/kernels.hpp"

namespace arrkit::stats {

namespace {

double sample_sd(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0));
}

std::vector<double> axis(std::span<const double> v, double h, std::size_t g) {
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it - 3.0 * h;
    const double hi = *hi_it + 3.0 * h;
    std::vector<double> out(g);
    for (std::size_t i = 0; i < g; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g - 1);
    return out;
}

// K(i, s) = exp(-((grid_i - data_s) / h)^2 / 2) for every grid point and sample.
Matrix kernel_matrix(const std::vector<double>& grid, std::span<const double> data, double h) {
    Matrix k(grid.size(), data.size());
    for (std::size_t i = 0; i < grid.size(); ++i) simd::gauss(data, grid[i], 1.0 / h, k.row(i));
    return k;
}

}  // namespace

KdeGrid kde2d(std::span<const double> x, std::span<const double> y, std::size_t grid_size, Bandwidth rule) {
    if (x.size() != y.size()) throw Error("kde2d: x and y lengths differ");
    if (x.size() < 10) throw Error("kde2d: need at least 10 samples");
    if (grid_size < 2) throw Error("kde2d: grid size must be at least 2");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError("kde2d: non-finite sample");
    (void)rule;
    const double n = static_cast<double>(x.size());
    const double factor = std::pow(n, -1.0 / 6.0);
    KdeGrid out;
    out.hx = sample_sd(x) * factor;
    out.hy = sample_sd(y) * factor;
    if (!(out.hx > 0.0)) throw Error("kde2d: zero variance on the x axis");
    if (!(out.hy > 0.0)) throw Error("kde2d: zero variance on the y axis");
    out.x_grid = axis(x, out.hx, grid_size);
    out.y_grid = axis(y, out.hy, grid_size);

    const Matrix kx = kernel_matrix(out.x_grid, x, out.hx);
    const Matrix ky = kernel_matrix(out.y_grid, y, out.hy);
    const double norm = 1.0 / (2.0 * std::numbers::pi * out.hx * out.hy * n);
    out.density = Matrix(grid_size, grid_size);
    for (std::size_t i = 0; i < grid_size; ++i)
        for (std::size_t j = 0; j < grid_size; ++j) out.density(i, j) = norm * simd::dot(kx.row(i), ky.row(j));
    return out;
}

double grid_mass(const KdeGrid& grid) {
    const std::size_t gx = grid.x_grid.size();
    const std::size_t gy = grid.y_grid.size();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < gx; ++i) {
        const double dx = grid.x_grid[i + 1] - grid.x_grid[i];
        for (std::size_t j = 0; j + 1 < gy; ++j) {
            const double dy = grid.y_grid[j + 1] - grid.y_grid[j];
            total += 0.25 * dx * dy *
                     (grid.density(i, j) + grid.density(i + 1, j) + grid.density(i, j + 1) + grid.density(i + 1, j + 1));
        }
    }
    return total;
}

void write_kde_csv(const std::filesystem::path& path, const KdeGrid& grid) {
    std::string out = "x,y,density\n";
    for (std::size_t i = 0; i < grid.x_grid.size(); ++i)
        for (std::size_t j = 0; j < grid.y_grid.size(); ++j) {
            out += format_double(grid.x_grid[i]);
            out += ',';
            out += format_double(grid.y_grid[j]);
            out += ',';
            out += format_double(grid.density(i, j));
            out += '\n';
        }
    write_file(path, out);
}

}  // namespace arrkit::stats
