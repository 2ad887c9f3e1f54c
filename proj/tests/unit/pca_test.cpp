#include <gtest/gtest.h>

#include <cmath>

#include "arrkit/core/error.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/pca/jacobi.hpp"
#include "arrkit/pca/pca.hpp"

using namespace arrkit;
using namespace arrkit::pca;

namespace {

Matrix gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (auto& v : m.flat()) v = rng.normal();
    return m;
}


}  // namespace

TEST(Jacobi, DiagonalMatrix) {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 4.0;
    const auto e = jacobi_eigen(a);
    EXPECT_EQ(e.values, (std::vector<double>{4.0, 1.0}));
    EXPECT_EQ(e.vectors(1, 0), 1.0);
    EXPECT_EQ(e.vectors(0, 1), 1.0);
    EXPECT_EQ(e.vectors(0, 0), 0.0);
}

TEST(Jacobi, RandomSymmetricReconstructs) {
    Rng rng(1);
    const auto g = gaussian(11, 11, rng);
    Matrix a(11, 11);
    for (std::size_t i = 0; i < 11; ++i)
        for (std::size_t j = 0; j < 11; ++j) a(i, j) = g(i, j) + g(j, i);
    const auto e = jacobi_eigen(a);
    Matrix back(11, 11);
    for (std::size_t i = 0; i < 11; ++i)
        for (std::size_t j = 0; j < 11; ++j)
            for (std::size_t k = 0; k < 11; ++k) back(i, j) += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
    EXPECT_LT(frobenius_diff(a, back), 1e-10);
    for (std::size_t k = 1; k < 11; ++k) EXPECT_GE(e.values[k - 1], e.values[k]);
}

TEST(Pca, RankOneData) {
    Rng rng(2);
    Matrix x(200, 6);
    for (std::size_t t = 0; t < 200; ++t) {
        const double f = rng.normal();
        for (std::size_t a = 0; a < 6; ++a) x(t, a) = f;
    }
    const auto m = fit_pca(x, 1);
    double trace = 0.0;
    for (double v : m.eigenvalues) trace += v;
    EXPECT_NEAR(m.eigenvalues[0], trace, 1e-10 * trace);
    for (std::size_t k = 1; k < 6; ++k) EXPECT_LT(std::abs(m.eigenvalues[k]), 1e-10 * trace);
    EXPECT_NEAR(absorption_ratio(m), 1.0, 1e-10);
}

TEST(Pca, FullAndEmptyBasis) {
    Rng rng(3);
    const auto x = gaussian(100, 5, rng);
    const auto full = fit_pca(x, 5);
    EXPECT_NEAR(absorption_ratio(full), 1.0, 1e-12);
    EXPECT_LT(frobenius_diff(project(full, x), x), 1e-10);

    const auto none = fit_pca(x, 0);
    const auto p = project(none, x);
    for (std::size_t t = 0; t < 100; ++t)
        for (std::size_t a = 0; a < 5; ++a) EXPECT_NEAR(p(t, a), none.mean[a], 1e-15);
    EXPECT_THROW(fit_pca(x, 6), Error);
}

TEST(Pca, ProjectionIsIdempotent) {
    Rng rng(4);
    const auto x = gaussian(150, 6, rng);
    const auto m = fit_pca(x, 2);
    const auto once = project(m, x);
    EXPECT_LT(frobenius_diff(project(m, once), once), 1e-12);
}

TEST(Pca, RotationEquivariantAbsorption) {
    Rng rng(5);
    auto x = gaussian(300, 4, rng);
    for (std::size_t t = 0; t < 300; ++t) x(t, 1) += 2.0 * x(t, 0);
    const double c = std::cos(0.7), s = std::sin(0.7);
    Matrix y = x;
    for (std::size_t t = 0; t < 300; ++t) {
        y(t, 0) = c * x(t, 0) - s * x(t, 2);
        y(t, 2) = s * x(t, 0) + c * x(t, 2);
    }
    EXPECT_NEAR(absorption_ratio(fit_pca(x, 1)), absorption_ratio(fit_pca(y, 1)), 1e-10);
}

TEST(Pca, FlatSpectrumAbsorption) {
    Rng rng(6);
    const auto x = gaussian(20000, 50, rng);
    // K/N plus the top-K sampling excess of a white Wishart spectrum.
    const double ar = absorption_ratio(fit_pca(x, 10));
    EXPECT_GT(ar, 0.2);
    EXPECT_LT(ar, 0.2 + 0.05);
}

TEST(Pca, ReconstructionErrorIsResidual) {
    Rng rng(7);
    const auto x = gaussian(80, 5, rng);
    const auto m = fit_pca(x, 2);
    const auto rec = pca_reconstruct(m, x);
    for (std::size_t t = 0; t < 80; ++t)
        for (std::size_t a = 0; a < 5; ++a) {
            const double d = x(t, a) - rec.reconstructed(t, a);
            EXPECT_EQ(rec.squared_error(t, a), d * d);
            EXPECT_EQ(rec.squared_return(t, a), x(t, a) * x(t, a));
        }
}

TEST(Pca, JsonRoundTrip) {
    Rng rng(8);
    auto m = fit_pca(gaussian(50, 4, rng), 2);
    m.asset_ids = {"a", "b", "c", "d"};
    EXPECT_EQ(pca_from_json(nlohmann::json::parse(to_json(m).dump())), m);
}
