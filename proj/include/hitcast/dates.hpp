#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hitcast {

// Calendar date, stored as days since 1970-01-01. All date math is UTC;
// there is deliberately no timezone or DST handling anywhere in the pipeline.
class Date {
public:
    Date() = default;

    static Date from_days(std::int64_t d);
    static Date from_ymd(int year, int month, int day);  // DataError on invalid
    static Date parse(std::string_view iso);             // "YYYY-MM-DD", DataError
    static std::optional<Date> try_parse(std::string_view iso);

    std::int64_t days() const { return days_; }
    Date plus_days(std::int64_t n) const { return from_days(days_ + n); }

    // Monday of this date's week (Monday maps to itself).
    Date monday() const;
    bool is_monday() const { return monday().days_ == days_; }

    std::string iso() const;

    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

// Inclusive date interval [start, end].
struct DateInterval {
    Date start;
    Date end;

    // "YYYY-MM-DD..YYYY-MM-DD"; DataError on malformed or start > end.
    static DateInterval parse(std::string_view spec);
    static DateInterval make(Date start, Date end);

    bool contains(Date d) const { return start <= d && d <= end; }
    // Timestamp lies within [start 00:00:00, end 24:00:00).
    bool contains_ts(std::int64_t epoch_seconds) const;

    std::string str() const { return start.iso() + ".." + end.iso(); }
};

// ISO 8601 instant with 'Z' or a numeric offset ("+HH:MM", "+HHMM", "+HH"),
// e.g. "2013-05-02T20:15:00Z". Fractional seconds are truncated.
// Returns epoch seconds UTC.
std::int64_t parse_timestamp(std::string_view iso);
std::optional<std::int64_t> try_parse_timestamp(std::string_view iso);

std::string format_timestamp(std::int64_t epoch_seconds);  // always ...Z
Date date_of_timestamp(std::int64_t epoch_seconds);

} // namespace hitcast
