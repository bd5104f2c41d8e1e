#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tenniscast {

/// Calendar date at day resolution, stored as days since 1970-01-01.
/// Source data carries nothing finer than a day.
class Date {
public:
    constexpr Date() = default;
    explicit constexpr Date(int32_t serial) : serial_(serial) {}

    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Accepts ISO-8601 (2014-01-06), dd/mm/yyyy and dd/mm/yy (two-digit
    /// years are 2000-based, matching the tennis-data files).
    static std::optional<Date> parse(std::string_view text);

    constexpr int32_t serial() const { return serial_; }
    int year() const;
    unsigned month() const;
    unsigned day() const;

    Date plus_days(int n) const { return Date(serial_ + n); }
    /// Same calendar day n years earlier/later; Feb 29 clamps to Feb 28.
    Date plus_years(int n) const;

    /// Fractional years from *this to `later` (day count / 365.25).
    double years_until(Date later) const {
        return static_cast<double>(later.serial_ - serial_) / 365.25;
    }

    std::string iso() const;

    auto operator<=>(const Date&) const = default;

private:
    int32_t serial_ = 0;
};

}  // namespace tenniscast
