#include "arrkit/market/calendar.hpp"

#include <algorithm>

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"

namespace arrkit::market {

std::optional<std::size_t> SessionCalendar::find(Date d) const {
    auto it = std::lower_bound(sessions.begin(), sessions.end(), d,
                               [](const Session& s, Date v) { return s.date < v; });
    if (it == sessions.end() || it->date != d) return std::nullopt;
    return static_cast<std::size_t>(it - sessions.begin());
}

bool SessionCalendar::is_excluded(Date d) const {
    return std::find(excluded_dates.begin(), excluded_dates.end(), d) != excluded_dates.end();
}

void SessionCalendar::validate() const {
    if (sessions.empty()) throw DataError("no sessions");
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const auto& s = sessions[i];
        if (s.close - s.open != kSessionSeconds) throw DataError("session " + s.date.to_string() + " is not a full session");
        if (s.open != s.date.epoch_seconds() + kOpenSecondOfDay)
            throw DataError("session " + s.date.to_string() + " does not open at 09:30");
        if (i > 0 && sessions[i - 1].close >= s.open) throw DataError("sessions overlap or are out of order");
        if (is_excluded(s.date)) throw DataError("excluded date " + s.date.to_string() + " appears as a session");
    }
}

std::string SessionCalendar::hash() const {
    std::string canon;
    for (const auto& s : sessions) canon += s.date.to_string() + ";";
    canon += "|";
    for (const auto& d : excluded_dates) canon += d.to_string() + ";";
    return hex64(fnv1a64(canon));
}

SessionCalendar build_session_calendar(const std::vector<Date>& dates, const std::vector<Date>& half_days) {
    if (dates.empty()) throw DataError("no sessions");
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (dates[i] == dates[i - 1]) throw DataError("duplicate date " + dates[i].to_string());
        if (dates[i] < dates[i - 1]) throw DataError("dates must be sorted");
    }
    SessionCalendar cal;
    for (Date d : dates) {
        if (std::find(half_days.begin(), half_days.end(), d) != half_days.end()) {
            cal.excluded_dates.push_back(d);
            continue;
        }
        const auto open = d.epoch_seconds() + kOpenSecondOfDay;
        cal.sessions.push_back({d, open, open + kSessionSeconds});
    }
    if (cal.sessions.empty()) throw DataError("no sessions");
    return cal;
}

std::vector<Date> weekdays_from(Date start, std::size_t count, const std::vector<Date>& half_days) {
    std::vector<Date> out;
    for (Date d = start; out.size() < count; d = d.next()) {
        if (!d.is_weekday()) continue;
        if (std::find(half_days.begin(), half_days.end(), d) != half_days.end()) continue;
        out.push_back(d);
    }
    return out;
}

}  // namespace arrkit::market
