#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <unistd.h>

#include "arrkit/market/synthetic.hpp"
#include "arrkit/market/tick_panel.hpp"

namespace arrkit::test_util {

inline std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("arrkit_unit_" + std::to_string(::getpid())) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Panel over `sessions` consecutive weekdays from 2013-01-02 with
// price(row, asset) filling every cell.
inline market::TickPanel make_panel(std::size_t sessions, std::size_t assets,
                                    const std::function<double(std::size_t, std::size_t)>& price) {
    market::TickPanel p;
    p.calendar = market::build_session_calendar(market::weekdays_from(Date(2013, 1, 2), sessions, {}), {});
    for (std::size_t a = 0; a < assets; ++a) p.asset_ids.push_back("A" + std::to_string(a));
    const std::size_t rows = sessions * static_cast<std::size_t>(market::kSessionSeconds);
    p.prices = Matrix(rows, assets);
    for (std::size_t s = 0; s < sessions; ++s) {
        const auto [b, e] = p.session_rows(s);
        for (std::size_t t = b; t < e; ++t) {
            p.timestamps.push_back(p.calendar.sessions[s].open + 1 + static_cast<std::int64_t>(t - b));
            p.session_index.push_back(static_cast<std::uint32_t>(s));
            for (std::size_t a = 0; a < assets; ++a) p.prices(t, a) = price(t, a);
        }
    }
    return p;
}

inline market::SyntheticMarketConfig small_synthetic(std::size_t sessions, std::uint64_t seed = 1) {
    market::SyntheticMarketConfig c;
    c.n_sessions = sessions;
    c.regime_schedule = {{0, sessions - 1, 1.0, 0.5}};
    c.seed = seed;
    return c;
}

}  // namespace arrkit::test_util
