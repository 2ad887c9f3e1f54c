#include "arrkit/market/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "arrkit/core/error.hpp"
#include "arrkit/core/random.hpp"

namespace arrkit::market {
namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kLoadingStream = 1;
constexpr std::uint64_t kBlockStream = 2;
constexpr std::uint64_t kMarketStream = 3;
constexpr std::uint64_t kFactorStreamBase = 100;
constexpr std::uint64_t kAssetStreamBase = 1000;

constexpr std::array<const char*, 11> kSectorTickers = {
    "CRSPRET", "CRSPENT", "CRSPMTT", "CRSPIDT", "CRSPCGT", "CRSPHCT",
    "CRSPCST", "CRSPTET", "CRSPUTT", "CRSPFNT", "CRSPITT",
};

const Regime& regime_for(const SyntheticMarketConfig& c, std::size_t session) {
    for (const auto& r : c.regime_schedule)
        if (session >= r.first_session && session <= r.last_session) return r;
    throw DataError("session " + std::to_string(session) + " is not covered by the regime schedule");
}

}  // namespace

void SyntheticMarketConfig::validate() const {
    if (n_sessions == 0) throw DataError("synthetic config: n_sessions must be positive");
    if (include_market && n_assets < 2) throw DataError("synthetic config: need at least one sector besides the market");
    if (n_sectors() == 0) throw DataError("synthetic config: n_assets must be positive");
    if (n_factors == 0 || n_factors >= n_sectors())
        throw DataError("synthetic config: n_factors must be in [1, n_sectors)");
    if (!(return_scale > 0.0)) throw DataError("synthetic config: return_scale must be positive");
    if (intraday_amplitude < 0.0) throw DataError("synthetic config: intraday_amplitude must be non-negative");
    if (block_seconds == 0 || kSessionSeconds % static_cast<std::int64_t>(block_seconds) != 0)
        throw DataError("synthetic config: block_seconds must divide the session length");
    if (coupling_dispersion < 0.0 || vol_of_vol < 0.0)
        throw DataError("synthetic config: volatilities must be non-negative");
    if (std::abs(vol_persistence) >= 1.0) throw DataError("synthetic config: |vol_persistence| must be < 1");
    if (market_link < -1.0 || market_link > 1.0) throw DataError("synthetic config: market_link must be in [-1, 1]");
    if (regime_schedule.empty()) throw DataError("synthetic config: regime_schedule is empty");
    std::vector<int> covered(n_sessions, 0);
    for (const auto& r : regime_schedule) {
        if (r.first_session > r.last_session || r.last_session >= n_sessions)
            throw DataError("synthetic config: regime range out of bounds");
        if (!(r.loading_scale > 0.0) || !(r.idiosyncratic_vol >= 0.0))
            throw DataError("synthetic config: regime volatilities must be positive");
        for (std::size_t s = r.first_session; s <= r.last_session; ++s) ++covered[s];
    }
    for (std::size_t s = 0; s < n_sessions; ++s)
        if (covered[s] != 1) throw DataError("synthetic config: regimes must cover every session exactly once");
}

FactorLoadings synthetic_loadings(const SyntheticMarketConfig& c) {
    Rng rng(derive_seed(c.seed, kLoadingStream));
    const std::size_t n = c.n_sectors();
    FactorLoadings l{Matrix(n, c.n_factors), Matrix(n, c.n_factors)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < c.n_factors; ++k) {
            l.linear(i, k) = k == 0 ? 0.6 + 0.8 * rng.uniform() : 0.8 * rng.normal();
            l.cubic(i, k) = rng.normal();
        }
    }
    return l;
}

SessionCalendar synthetic_calendar(const SyntheticMarketConfig& c) {
    auto dates = weekdays_from(c.start_date, c.n_sessions, c.half_days);
    // Half days falling inside the generated span are recorded as exclusions.
    std::vector<Date> all = dates;
    for (Date h : c.half_days)
        if (h > dates.front() && h < dates.back() && h.is_weekday()) all.push_back(h);
    std::sort(all.begin(), all.end());
    return build_session_calendar(all, c.half_days);
}

std::vector<std::string> synthetic_asset_ids(const SyntheticMarketConfig& c) {
    std::vector<std::string> ids;
    if (c.include_market) ids.emplace_back("CRSPTMT");
    for (std::size_t i = 0; i < c.n_sectors(); ++i) {
        std::string id = kSectorTickers[i % kSectorTickers.size()];
        if (i >= kSectorTickers.size()) id += "_" + std::to_string(i / kSectorTickers.size());
        ids.push_back(id);
    }
    return ids;
}

TickPanel generate_synthetic_market(const SyntheticMarketConfig& c) {
    c.validate();
    const auto loadings = synthetic_loadings(c);
    const std::size_t n_sec = c.n_sectors();
    const std::size_t k_fac = c.n_factors;
    const std::size_t col0 = c.include_market ? 1 : 0;

    TickPanel panel;
    panel.calendar = synthetic_calendar(c);
    panel.asset_ids = synthetic_asset_ids(c);
    const std::size_t rows = c.n_sessions * static_cast<std::size_t>(kSessionSeconds);
    panel.timestamps.resize(rows);
    panel.session_index.resize(rows);
    panel.prices = Matrix(rows, c.n_assets);

    std::vector<Rng> factor_rng, asset_rng;
    for (std::size_t k = 0; k < k_fac; ++k) factor_rng.emplace_back(derive_seed(c.seed, kFactorStreamBase + k));
    for (std::size_t i = 0; i < n_sec; ++i) asset_rng.emplace_back(derive_seed(c.seed, kAssetStreamBase + i));
    Rng block_rng(derive_seed(c.seed, kBlockStream));
    Rng market_rng(derive_seed(c.seed, kMarketStream));

    const double a = c.intraday_amplitude;
    const double link_resid = std::sqrt(std::max(0.0, 1.0 - c.market_link * c.market_link));
    std::vector<double> log_price(c.n_assets, std::log(100.0));
    std::vector<double> w(k_fac), z(k_fac);
    double h = 0.0;
    double prev_log_rho = 0.0;

    for (std::size_t s = 0; s < c.n_sessions; ++s) {
        const Regime& reg = regime_for(c, s);
        const auto [b, e] = panel.session_rows(s);
        double rho = 1.0, m = 1.0;
        for (std::size_t t = b; t < e; ++t) {
            const std::size_t i = t - b;
            panel.timestamps[t] = panel.calendar.sessions[s].open + 1 + static_cast<std::int64_t>(i);
            panel.session_index[t] = static_cast<std::uint32_t>(s);
            if (i % c.block_seconds == 0) {
                const double log_rho = c.coupling_dispersion * block_rng.normal();
                h = c.vol_persistence * h + c.coupling_to_vol * prev_log_rho + c.vol_of_vol * block_rng.normal();
                prev_log_rho = log_rho;
                rho = std::exp(log_rho);
                m = std::exp(h);
            }
            if (i > 0) {
                const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(kSessionSeconds);
                const double u = std::sqrt((1.0 + a * (2.0 * x - 1.0) * (2.0 * x - 1.0)) / (1.0 + a / 3.0));
                const double scale = reg.loading_scale * rho * m * u;
                for (std::size_t k = 0; k < k_fac; ++k) {
                    w[k] = factor_rng[k].normal();
                    z[k] = scale * w[k];
                }
                for (std::size_t n = 0; n < n_sec; ++n) {
                    double r = reg.idiosyncratic_vol * m * u * asset_rng[n].normal();
                    for (std::size_t k = 0; k < k_fac; ++k)
                        r += loadings.linear(n, k) * z[k] + c.nonlinearity * loadings.cubic(n, k) * z[k] * w[k] * w[k];
                    log_price[col0 + n] += c.return_scale * r;
                }
                if (c.include_market) {
                    const double r = reg.loading_scale * m * u * (c.market_link * w[0] + link_resid * market_rng.normal());
                    log_price[0] += c.return_scale * r;
                }
            }
            for (std::size_t n = 0; n < c.n_assets; ++n) panel.prices(t, n) = std::exp(log_price[n]);
        }
    }
    return panel;
}

}  // namespace arrkit::market
