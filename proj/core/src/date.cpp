#include "tenniscast/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace tenniscast {

namespace {

namespace chr = std::chrono;

chr::year_month_day to_ymd(int32_t serial) {
    return chr::year_month_day{chr::sys_days{chr::days{serial}}};
}

std::optional<int> parse_int(std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    return Date(static_cast<int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

std::optional<Date> Date::parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    char sep = 0;
    for (char c : text)
        if (c == '-' || c == '/') { sep = c; break; }
    if (sep == 0) return std::nullopt;

    size_t p1 = text.find(sep);
    size_t p2 = text.find(sep, p1 + 1);
    if (p1 == std::string_view::npos || p2 == std::string_view::npos) return std::nullopt;
    auto a = parse_int(text.substr(0, p1));
    auto b = parse_int(text.substr(p1 + 1, p2 - p1 - 1));
    auto c = parse_int(text.substr(p2 + 1));
    if (!a || !b || !c) return std::nullopt;

    int year, month, day;
    if (sep == '-') {  // ISO: yyyy-mm-dd
        year = *a; month = *b; day = *c;
    } else {  // dd/mm/yyyy or dd/mm/yy
        day = *a; month = *b; year = *c;
        if (year < 100) year += 2000;
    }
    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
    chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                            chr::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) return std::nullopt;
    return Date(static_cast<int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

int Date::year() const { return static_cast<int>(to_ymd(serial_).year()); }
unsigned Date::month() const { return static_cast<unsigned>(to_ymd(serial_).month()); }
unsigned Date::day() const { return static_cast<unsigned>(to_ymd(serial_).day()); }

Date Date::plus_years(int n) const {
    auto ymd = to_ymd(serial_);
    chr::year_month_day shifted{ymd.year() + chr::years{n}, ymd.month(), ymd.day()};
    if (!shifted.ok())  // Feb 29 -> Feb 28
        shifted = chr::year_month_day{shifted.year(), shifted.month(), chr::day{28}};
    return Date(static_cast<int32_t>(chr::sys_days{shifted}.time_since_epoch().count()));
}

std::string Date::iso() const {
    auto ymd = to_ymd(serial_);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

}  // namespace tenniscast
