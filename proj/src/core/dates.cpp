#include "arrkit/core/dates.hpp"

#include <charconv>
#include <cstdio>

#include "arrkit/core/error.hpp"

namespace arrkit {
namespace {

using namespace std::chrono;

template <class T>
T parse_int(std::string_view s, std::string_view what) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
    return value;
}

}  // namespace

Date::Date(int y, unsigned m, unsigned d) {
    const year_month_day ymd{year{y}, month{m}, day{d}};
    if (!ymd.ok()) throw DataError("invalid calendar date");
    days_ = static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count());
}

Date Date::parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw DataError("invalid date '" + std::string(iso) + "', expected YYYY-MM-DD");
    return Date(parse_int<int>(iso.substr(0, 4), "year"), parse_int<unsigned>(iso.substr(5, 2), "month"),
                parse_int<unsigned>(iso.substr(8, 2), "day"));
}

bool Date::is_weekday() const {
    const weekday wd{sys_days{std::chrono::days{days_}}};
    return wd != Saturday && wd != Sunday;
}

std::string Date::to_string() const {
    const year_month_day ymd{sys_days{std::chrono::days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::int64_t parse_timestamp(std::string_view text) {
    if (text.size() >= 19 && text[4] == '-' && (text[10] == 'T' || text[10] == ' ')) {
        std::string_view rest = text.substr(19);
        if (!(rest.empty() || rest == "Z"))
            throw DataError("unsupported timestamp suffix in '" + std::string(text) + "'");
        if (text[13] != ':' || text[16] != ':')
            throw DataError("invalid timestamp '" + std::string(text) + "'");
        const Date d = Date::parse(text.substr(0, 10));
        const auto hh = parse_int<int>(text.substr(11, 2), "hour");
        const auto mm = parse_int<int>(text.substr(14, 2), "minute");
        const auto ss = parse_int<int>(text.substr(17, 2), "second");
        if (hh > 23 || mm > 59 || ss > 59) throw DataError("invalid time of day in '" + std::string(text) + "'");
        return d.epoch_seconds() + hh * 3600 + mm * 60 + ss;
    }
    return parse_int<std::int64_t>(text, "timestamp");
}

}  // namespace arrkit
