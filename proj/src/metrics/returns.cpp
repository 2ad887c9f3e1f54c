#include "arrkit/metrics/returns.hpp"

#include <cmath>

#include "arrkit/core/error.hpp"

namespace arrkit::metrics {

using market::kSessionSeconds;

std::string_view frequency_name(Frequency f) {
    switch (f) {
        case Frequency::second: return "1s";
        case Frequency::min5: return "5min";
        case Frequency::hour1: return "1hour";
        case Frequency::day1: return "1day";
        case Frequency::week1: return "1week";
    }
    return "?";
}

Frequency parse_frequency(std::string_view name) {
    for (auto f : {Frequency::second, Frequency::min5, Frequency::hour1, Frequency::day1, Frequency::week1})
        if (frequency_name(f) == name) return f;
    throw Error("unknown frequency '" + std::string(name) + "'");
}

namespace {

std::int64_t intraday_seconds(Frequency f) {
    switch (f) {
        case Frequency::min5: return 300;
        case Frequency::hour1: return 3600;
        default: return 0;
    }
}

// Session start offsets within a panel's rows; rows are grouped by session.
std::vector<std::size_t> session_offsets(const std::vector<std::uint32_t>& session_index, std::size_t n_sessions) {
    std::vector<std::size_t> off(n_sessions + 1, session_index.size());
    for (std::size_t t = session_index.size(); t-- > 0;) off[session_index[t]] = t;
    for (std::size_t s = n_sessions; s-- > 0;) off[s] = std::min(off[s], off[s + 1]);
    return off;
}

void check_weeks(std::size_t n_sessions) {
    if (n_sessions < kSessionsPerWeek) throw Error("interval larger than available data: need at least 5 sessions for weekly windows");
}

std::vector<std::size_t> week_ends(std::size_t n_sessions, WeekMode mode) {
    check_weeks(n_sessions);
    std::vector<std::size_t> ends;
    const std::size_t step = mode == WeekMode::rolling ? 1 : kSessionsPerWeek;
    for (std::size_t s = kSessionsPerWeek - 1; s < n_sessions; s += step) ends.push_back(s);
    return ends;
}

}  // namespace

std::pair<std::size_t, std::size_t> ReturnsPanel::session_range(std::size_t first, std::size_t last) const {
    const auto off = session_offsets(session_index, calendar.size());
    return {off[first], off[last + 1]};
}

ReturnsPanel log_returns(const market::TickPanel& panel, Frequency interval, WeekMode week_mode) {
    ReturnsPanel out;
    out.interval = interval;
    out.asset_ids = panel.asset_ids;
    out.calendar = panel.calendar;
    const std::size_t n = panel.assets();
    const std::size_t n_sessions = panel.sessions();
    std::vector<double> row(n);
    std::vector<double> flat;

    auto log_ratio = [&](std::size_t to, std::size_t from) {
        for (std::size_t a = 0; a < n; ++a) row[a] = std::log(panel.prices(to, a)) - std::log(panel.prices(from, a));
    };
    auto emit = [&](std::int64_t ts, std::size_t session) {
        out.timestamps.push_back(ts);
        out.session_index.push_back(static_cast<std::uint32_t>(session));
        flat.insert(flat.end(), row.begin(), row.end());
    };

    switch (interval) {
        case Frequency::second:
            flat.reserve(panel.rows() * n);
            for (std::size_t s = 0; s < n_sessions; ++s) {
                const auto [b, e] = panel.session_rows(s);
                for (std::size_t t = b + 1; t < e; ++t) {
                    log_ratio(t, t - 1);
                    emit(panel.timestamps[t], s);
                }
            }
            break;
        case Frequency::min5:
        case Frequency::hour1: {
            const auto dt = static_cast<std::size_t>(intraday_seconds(interval));
            for (std::size_t s = 0; s < n_sessions; ++s) {
                const auto [b, e] = panel.session_rows(s);
                // Row b holds second open+1; the price at open+k*dt sits at row b + k*dt - 1.
                for (std::size_t k = 0; (k + 1) * dt <= static_cast<std::size_t>(kSessionSeconds); ++k) {
                    const std::size_t from = k == 0 ? b : b + k * dt - 1;
                    const std::size_t to = b + (k + 1) * dt - 1;
                    log_ratio(to, from);
                    emit(panel.timestamps[to], s);
                }
            }
            break;
        }
        case Frequency::day1:
            for (std::size_t s = 0; s < n_sessions; ++s) {
                const auto [b, e] = panel.session_rows(s);
                log_ratio(e - 1, b);
                emit(panel.timestamps[e - 1], s);
            }
            break;
        case Frequency::week1: {
            Matrix daily(n_sessions, n);
            for (std::size_t s = 0; s < n_sessions; ++s) {
                const auto [b, e] = panel.session_rows(s);
                log_ratio(e - 1, b);
                for (std::size_t a = 0; a < n; ++a) daily(s, a) = row[a];
            }
            for (std::size_t s : week_ends(n_sessions, week_mode)) {
                for (std::size_t a = 0; a < n; ++a) {
                    double acc = 0.0;
                    for (std::size_t j = s + 1 - kSessionsPerWeek; j <= s; ++j) acc += daily(j, a);
                    row[a] = acc;
                }
                emit(panel.timestamps[panel.session_rows(s).second - 1], s);
            }
            break;
        }
    }
    out.returns = Matrix(out.timestamps.size(), n, std::move(flat));
    return out;
}

ReturnsPanel select(const ReturnsPanel& panel, std::size_t first_session, std::size_t last_session,
                    const std::vector<std::size_t>& columns) {
    if (first_session > last_session || last_session >= panel.calendar.size())
        throw Error("session selection out of range");
    const auto [b, e] = panel.session_range(first_session, last_session);
    ReturnsPanel out;
    out.interval = panel.interval;
    out.calendar.excluded_dates = panel.calendar.excluded_dates;
    out.calendar.sessions.assign(panel.calendar.sessions.begin() + static_cast<std::ptrdiff_t>(first_session),
                                 panel.calendar.sessions.begin() + static_cast<std::ptrdiff_t>(last_session + 1));
    for (std::size_t c : columns) {
        if (c >= panel.assets()) throw Error("column selection out of range");
        out.asset_ids.push_back(panel.asset_ids[c]);
    }
    out.timestamps.assign(panel.timestamps.begin() + static_cast<std::ptrdiff_t>(b),
                          panel.timestamps.begin() + static_cast<std::ptrdiff_t>(e));
    out.session_index.reserve(e - b);
    for (std::size_t t = b; t < e; ++t)
        out.session_index.push_back(panel.session_index[t] - static_cast<std::uint32_t>(first_session));
    out.returns = Matrix(e - b, columns.size());
    for (std::size_t t = b; t < e; ++t)
        for (std::size_t j = 0; j < columns.size(); ++j) out.returns(t - b, j) = panel.returns(t, columns[j]);
    return out;
}

WindowGrid window_grid(const ReturnsPanel& base, Frequency f, WeekMode week_mode) {
    if (base.interval != Frequency::second) throw Error("window_grid requires a 1-second returns panel");
    if (f == Frequency::second) throw Error("window_grid: unsupported aggregation frequency '1s'");
    const std::size_t n_sessions = base.calendar.size();
    if (n_sessions == 0 || base.rows() == 0) throw Error("empty window set");
    const auto off = session_offsets(base.session_index, n_sessions);
    constexpr std::size_t blocks_per_session = static_cast<std::size_t>(kSessionSeconds) / 300;

    WindowGrid g;
    g.frequency = f;
    auto push = [&](std::int64_t stamp, std::size_t session, std::size_t row_b, std::size_t row_e,
                    std::size_t blk_b, std::size_t blk_e) {
        g.stamps.push_back(stamp);
        g.session.push_back(static_cast<std::uint32_t>(session));
        g.rows.emplace_back(row_b, row_e);
        g.blocks.emplace_back(blk_b, blk_e);
    };
    // First row index of the session whose stamp exceeds `edge`.
    auto row_after = [&](std::size_t s, std::int64_t edge) {
        std::size_t t = off[s];
        const std::int64_t first = base.timestamps[t];
        if (edge >= first) t += static_cast<std::size_t>(edge - first + 1);
        return std::min(t, off[s + 1]);
    };

    switch (f) {
        case Frequency::min5:
        case Frequency::hour1: {
            const auto dt = intraday_seconds(f);
            const std::size_t blocks_per_window = static_cast<std::size_t>(dt / 300);
            for (std::size_t s = 0; s < n_sessions; ++s) {
                const auto open = base.calendar.sessions[s].open;
                for (std::int64_t k = 0; (k + 1) * dt <= kSessionSeconds; ++k) {
                    const auto b = row_after(s, open + k * dt);
                    const auto e = row_after(s, open + (k + 1) * dt);
                    const std::size_t blk = s * blocks_per_session + static_cast<std::size_t>(k) * blocks_per_window;
                    push(open + (k + 1) * dt, s, b, e, blk, blk + blocks_per_window);
                }
            }
            break;
        }
        case Frequency::day1:
            for (std::size_t s = 0; s < n_sessions; ++s)
                push(base.calendar.sessions[s].close, s, off[s], off[s + 1], s * blocks_per_session,
                     (s + 1) * blocks_per_session);
            break;
        case Frequency::week1:
            for (std::size_t s : week_ends(n_sessions, week_mode)) {
                const std::size_t first = s + 1 - kSessionsPerWeek;
                push(base.calendar.sessions[s].close, s, off[first], off[s + 1], first * blocks_per_session,
                     (s + 1) * blocks_per_session);
            }
            break;
        case Frequency::second:
            break;
    }
    if (g.size() == 0) throw Error("empty window set");
    return g;
}

std::vector<double> aggregate_blocks(const WindowGrid& grid, const std::vector<double>& block_values) {
    std::vector<double> out(grid.size());
    for (std::size_t w = 0; w < grid.size(); ++w) {
        const auto [b, e] = grid.blocks[w];
        if (e > block_values.size()) throw Error("aggregate_blocks: block range out of bounds");
        double acc = 0.0;
        for (std::size_t i = b; i < e; ++i) acc += block_values[i];
        out[w] = acc;
    }
    return out;
}

}  // namespace arrkit::metrics
