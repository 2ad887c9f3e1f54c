#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "arrkit/core/matrix.hpp"
#include "arrkit/market/calendar.hpp"

namespace arrkit::market {

// Per-second prices for N assets on the 1-second grid of every calendar
// session. Row timestamps of session s run from open+1 to close inclusive;
// the price at second t is the last price observed at or before t.
struct TickPanel {
    std::vector<std::int64_t> timestamps;
    Matrix prices;  // T x N
    std::vector<std::string> asset_ids;
    std::vector<std::uint32_t> session_index;
    SessionCalendar calendar;

    std::size_t rows() const { return timestamps.size(); }
    std::size_t assets() const { return asset_ids.size(); }
    std::size_t sessions() const { return calendar.size(); }

    // Rows [begin, end) of session s.
    std::pair<std::size_t, std::size_t> session_rows(std::size_t s) const {
        return {s * kSessionSeconds, (s + 1) * kSessionSeconds};
    }

    std::size_t asset_column(const std::string& id) const;

    void validate() const;

    friend bool operator==(const TickPanel&, const TickPanel&) = default;
};

// Reads a long-format CSV with header `timestamp,asset_id,price`. Timestamps
// may be integer epoch seconds or ISO-8601. Observations outside calendar
// sessions, including excluded dates, are dropped.
TickPanel load_tick_csv(const std::filesystem::path& path, const SessionCalendar& calendar);

void write_tick_csv(const TickPanel& panel, const std::filesystem::path& path);

}  // namespace arrkit::market
