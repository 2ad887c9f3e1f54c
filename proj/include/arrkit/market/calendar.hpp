#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arrkit/core/dates.hpp"

namespace arrkit::market {

// Regular session 09:30-16:00 exchange time; timestamps are exchange-local
// seconds since the epoch.
inline constexpr std::int64_t kOpenSecondOfDay = 34200;
inline constexpr std::int64_t kSessionSeconds = 23400;

struct Session {
    Date date;
    std::int64_t open = 0;
    std::int64_t close = 0;

    friend bool operator==(const Session&, const Session&) = default;
};

struct SessionCalendar {
    std::vector<Session> sessions;
    std::vector<Date> excluded_dates;

    std::size_t size() const { return sessions.size(); }
    std::optional<std::size_t> find(Date d) const;
    bool is_excluded(Date d) const;
    // Throws DataError when an invariant is broken.
    void validate() const;
    // Stable fingerprint of the session list and exclusions.
    std::string hash() const;

    friend bool operator==(const SessionCalendar&, const SessionCalendar&) = default;
};

// Full 6.5-hour sessions on `dates`; dates listed in `half_days` are excluded.
SessionCalendar build_session_calendar(const std::vector<Date>& dates, const std::vector<Date>& half_days);

// The first `count` weekdays on or after `start`, skipping `half_days`.
std::vector<Date> weekdays_from(Date start, std::size_t count, const std::vector<Date>& half_days);

}  // namespace arrkit::market
