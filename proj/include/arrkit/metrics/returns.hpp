#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arrkit/core/matrix.hpp"
#include "arrkit/market/tick_panel.hpp"

namespace arrkit::metrics {

enum class Frequency { second, min5, hour1, day1, week1 };

inline constexpr std::array<Frequency, 4> kAggregationFrequencies = {
    Frequency::min5, Frequency::hour1, Frequency::day1, Frequency::week1};

std::string_view frequency_name(Frequency f);
Frequency parse_frequency(std::string_view name);

// Sessions per trading week.
inline constexpr std::size_t kSessionsPerWeek = 5;

// Weekly windows: rolling 5-session blocks stepping one session (analysis) or
// non-overlapping blocks (forecast targets).
enum class WeekMode { rolling, non_overlapping };

// Log returns on a sampling grid. Returns never span a session boundary
// except weekly returns, which are the sum of their sessions' open-to-close
// returns.
struct ReturnsPanel {
    std::vector<std::int64_t> timestamps;  // right edge of each return
    Matrix returns;                        // T x N
    Frequency interval = Frequency::second;
    std::vector<std::uint32_t> session_index;
    std::vector<std::string> asset_ids;
    market::SessionCalendar calendar;

    std::size_t rows() const { return timestamps.size(); }
    std::size_t assets() const { return returns.cols(); }

    // Row range [begin, end) of sessions [first, last].
    std::pair<std::size_t, std::size_t> session_range(std::size_t first, std::size_t last) const;
};

ReturnsPanel log_returns(const market::TickPanel& panel, Frequency interval,
                         WeekMode week_mode = WeekMode::rolling);

// Restricts a panel to rows of sessions [first, last] and the given columns.
ReturnsPanel select(const ReturnsPanel& panel, std::size_t first_session, std::size_t last_session,
                    const std::vector<std::size_t>& columns);

// Aggregation windows over a 1-second returns panel. Intraday windows are
// clock-aligned from the open, (open + k*dt, open + (k+1)*dt]; a trailing
// window shorter than dt is dropped. Each window is also expressed as a range
// of 5-minute blocks so coarse sums can be formed from fine ones.
struct WindowGrid {
    Frequency frequency = Frequency::min5;
    std::vector<std::int64_t> stamps;
    std::vector<std::uint32_t> session;                       // session of the right edge
    std::vector<std::pair<std::size_t, std::size_t>> rows;    // row range in the base panel
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // range of 5-min blocks

    std::size_t size() const { return stamps.size(); }
};

WindowGrid window_grid(const ReturnsPanel& base, Frequency f, WeekMode week_mode = WeekMode::rolling);

// Sums of per-block values over each window of `grid`, accumulated block by
// block in chronological order.
std::vector<double> aggregate_blocks(const WindowGrid& grid, const std::vector<double>& block_values);

}  // namespace arrkit::metrics
