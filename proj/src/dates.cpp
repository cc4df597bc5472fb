#include "hitcast/dates.hpp"

#include <array>
#include <cstdio>

#include "hitcast/errors.hpp"

namespace hitcast {

namespace {

// Civil <-> day-count conversions (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y += m <= 2;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> lens{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lens[static_cast<std::size_t>(month - 1)];
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

} // namespace

Date Date::from_days(std::int64_t d) {
    Date date;
    date.days_ = d;
    return date;
}

Date Date::from_ymd(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month))
        throw DataError("invalid calendar date");
    return from_days(days_from_civil(year, month, day));
}

std::optional<Date> Date::try_parse(std::string_view iso) {
    int y = 0, m = 0, d = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
    if (!parse_fixed_uint(iso, 0, 4, y) || !parse_fixed_uint(iso, 5, 2, m) ||
        !parse_fixed_uint(iso, 8, 2, d))
        return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return std::nullopt;
    return from_days(days_from_civil(y, m, d));
}

Date Date::parse(std::string_view iso) {
    auto d = try_parse(iso);
    if (!d) throw DataError("bad date: '" + std::string(iso) + "' (expected YYYY-MM-DD)");
    return *d;
}

Date Date::monday() const {
    // 1970-01-01 was a Thursday; day 0 is 3 days after its week's Monday.
    const std::int64_t shift = ((days_ + 3) % 7 + 7) % 7;
    return from_days(days_ - shift);
}

std::string Date::iso() const {
    std::int64_t y;
    int m, d;
    civil_from_days(days_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04lld-%02d-%02d", static_cast<long long>(y), m, d);
    return buf;
}

DateInterval DateInterval::make(Date start, Date end) {
    if (start > end) throw DataError("window start is after window end");
    return DateInterval{start, end};
}

DateInterval DateInterval::parse(std::string_view spec) {
    const auto sep = spec.find("..");
    if (sep == std::string_view::npos)
        throw DataError("bad window '" + std::string(spec) + "' (expected YYYY-MM-DD..YYYY-MM-DD)");
    return make(Date::parse(spec.substr(0, sep)), Date::parse(spec.substr(sep + 2)));
}

bool DateInterval::contains_ts(std::int64_t epoch_seconds) const {
    const std::int64_t lo = start.days() * 86400;
    const std::int64_t hi = (end.days() + 1) * 86400;
    return epoch_seconds >= lo && epoch_seconds < hi;
}

std::optional<std::int64_t> try_parse_timestamp(std::string_view iso) {
    // date part
    if (iso.size() < 11 || (iso[10] != 'T' && iso[10] != 't' && iso[10] != ' ')) return std::nullopt;
    const auto date = Date::try_parse(iso.substr(0, 10));
    if (!date) return std::nullopt;

    int hh = 0, mm = 0, ss = 0;
    if (!parse_fixed_uint(iso, 11, 2, hh)) return std::nullopt;
    if (iso.size() < 16 || iso[13] != ':' || !parse_fixed_uint(iso, 14, 2, mm)) return std::nullopt;
    std::size_t pos = 16;
    if (pos < iso.size() && iso[pos] == ':') {
        if (!parse_fixed_uint(iso, pos + 1, 2, ss)) return std::nullopt;
        pos += 3;
    }
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    if (ss == 60) ss = 59;  // fold leap seconds

    // fractional seconds: truncate
    if (pos < iso.size() && (iso[pos] == '.' || iso[pos] == ',')) {
        ++pos;
        std::size_t digits = 0;
        while (pos < iso.size() && iso[pos] >= '0' && iso[pos] <= '9') {
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
    }

    // offset
    if (pos >= iso.size()) return std::nullopt;
    std::int64_t offset = 0;
    const char c = iso[pos];
    if (c == 'Z' || c == 'z') {
        ++pos;
    } else if (c == '+' || c == '-') {
        int oh = 0, om = 0;
        if (!parse_fixed_uint(iso, pos + 1, 2, oh)) return std::nullopt;
        std::size_t opos = pos + 3;
        if (opos < iso.size() && iso[opos] == ':') {
            if (!parse_fixed_uint(iso, opos + 1, 2, om)) return std::nullopt;
            opos += 3;
        } else if (opos + 2 <= iso.size() && iso[opos] >= '0' && iso[opos] <= '9') {
            if (!parse_fixed_uint(iso, opos, 2, om)) return std::nullopt;
            opos += 2;
        }
        if (oh > 23 || om > 59) return std::nullopt;
        offset = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
        pos = opos;
    } else {
        return std::nullopt;
    }
    if (pos != iso.size()) return std::nullopt;

    return date->days() * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

std::int64_t parse_timestamp(std::string_view iso) {
    auto ts = try_parse_timestamp(iso);
    if (!ts) throw DataError("bad timestamp: '" + std::string(iso) + "'");
    return *ts;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    const int hh = static_cast<int>(rem / 3600);
    const int mm = static_cast<int>((rem % 3600) / 60);
    const int ss = static_cast<int>(rem % 60);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", Date::from_days(days).iso().c_str(), hh,
                  mm, ss);
    return buf;
}

Date date_of_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds % 86400 < 0) --days;
    return Date::from_days(days);
}

} // namespace hitcast
