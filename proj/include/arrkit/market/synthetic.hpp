#pragma once

#include <cstdint>
#include <vector>

#include "arrkit/core/dates.hpp"
#include "arrkit/core/matrix.hpp"
#include "arrkit/market/tick_panel.hpp"

namespace arrkit::market {

struct Regime {
    std::size_t first_session = 0;  // inclusive
    std::size_t last_session = 0;   // inclusive
    double loading_scale = 1.0;
    double idiosyncratic_vol = 0.5;
};

// Synthetic stand-in for an index panel: K latent Gaussian factors drive the
// sector returns through linear loadings plus an asset-specific cubic term,
// so the noiseless returns lie on a curved K-dimensional surface.
//
// Per second (sector n, factor k, 5-min block b, session regime L, xi):
//   z_k = L * rho_b * m_b * u(t) * w_k,           w_k ~ N(0,1)
//   r_n = scale * (sum_k beta_nk z_k + c * sum_k gamma_nk z_k w_k^2 + xi * m_b * u(t) * e_n)
// The cubic acts on the unit draw w_k, so the curvature of the surface does
// not depend on the volatility level.
// u(t) is a U-shaped intraday profile, rho_b a lognormal co-movement shock per
// block, and m_b = exp(h_b) a block volatility level with
//   h_b = phi * h_{b-1} + kappa * log(rho_{b-1}) + vol_of_vol * eta_b.
// kappa != 0 plants a dependence of the next block's volatility on the
// current block's co-movement. The optional market column is
//   r_mkt = scale * m_b * u(t) * L * (link * w_1 + sqrt(1 - link^2) * e_mkt).
struct SyntheticMarketConfig {
    std::size_t n_assets = 12;  // including the market column when present
    bool include_market = true;
    std::size_t n_sessions = 20;
    std::size_t n_factors = 2;
    std::vector<Regime> regime_schedule;
    double nonlinearity = 0.0;
    double return_scale = 1e-4;
    double intraday_amplitude = 0.5;
    std::size_t block_seconds = 300;
    double coupling_dispersion = 0.0;
    double vol_persistence = 0.0;
    double vol_of_vol = 0.0;
    double coupling_to_vol = 0.0;
    double market_link = 0.7;
    Date start_date = Date(2013, 1, 2);
    std::vector<Date> half_days;
    std::uint64_t seed = 42;

    std::size_t n_sectors() const { return include_market ? n_assets - 1 : n_assets; }

    // Throws DataError when the configuration is invalid.
    void validate() const;
};

struct FactorLoadings {
    Matrix linear;  // n_sectors x n_factors
    Matrix cubic;   // n_sectors x n_factors
};

FactorLoadings synthetic_loadings(const SyntheticMarketConfig& config);

SessionCalendar synthetic_calendar(const SyntheticMarketConfig& config);

std::vector<std::string> synthetic_asset_ids(const SyntheticMarketConfig& config);

// Deterministic given config.seed.
TickPanel generate_synthetic_market(const SyntheticMarketConfig& config);

}  // namespace arrkit::market
