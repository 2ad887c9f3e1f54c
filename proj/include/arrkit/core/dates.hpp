#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace arrkit {

// Calendar date stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days) : days_(days) {}
    Date(int year, unsigned month, unsigned day);

    static Date parse(std::string_view iso);  // YYYY-MM-DD

    std::int32_t days() const { return days_; }
    std::int64_t epoch_seconds() const { return static_cast<std::int64_t>(days_) * 86400; }
    bool is_weekday() const;
    std::string to_string() const;

    Date next() const { return Date(days_ + 1); }

    friend constexpr auto operator<=>(Date, Date) = default;

private:
    std::int32_t days_ = 0;
};

// Parses ISO-8601 "YYYY-MM-DDTHH:MM:SS" (also with a space separator and an
// optional trailing 'Z') or a plain integer of epoch seconds.
std::int64_t parse_timestamp(std::string_view text);

inline Date date_of(std::int64_t epoch_seconds) {
    auto days = epoch_seconds / 86400;
    if (epoch_seconds % 86400 < 0) --days;
    return Date(static_cast<std::int32_t>(days));
}

inline std::int64_t seconds_of_day(std::int64_t epoch_seconds) {
    const auto s = epoch_seconds % 86400;
    return s < 0 ? s + 86400 : s;
}

}  // namespace arrkit
