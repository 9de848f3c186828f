#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace geodiary {

constexpr std::int64_t kMsPerSecond = 1000;
constexpr std::int64_t kMsPerMinute = 60 * kMsPerSecond;
constexpr std::int64_t kMsPerHour = 60 * kMsPerMinute;
constexpr std::int64_t kMsPerDay = 24 * kMsPerHour;

// Proleptic-Gregorian day arithmetic (Hinnant's algorithms), exact over
// the whole useful range and independent of the C runtime's timezone.
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    int year = 1970;
    int month = 1;
    int day = 1;
};

inline CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

namespace detail {

inline bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace detail

/// Parses an RFC 3339 timestamp ("2024-05-14T08:35:00Z", optional
/// fractional seconds, "Z" or a +HH:MM/-HH:MM offset) to UTC
/// milliseconds since the epoch. The offset is applied and discarded.
inline std::optional<std::int64_t> parse_rfc3339_ms(std::string_view s) {
    int y, mo, d, h, mi, se;
    if (!detail::parse_fixed_uint(s, 0, 4, y)) return std::nullopt;
    if (s.size() < 20 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
    if (s[13] != ':' || s[16] != ':') return std::nullopt;
    if (!detail::parse_fixed_uint(s, 5, 2, mo) || !detail::parse_fixed_uint(s, 8, 2, d) ||
        !detail::parse_fixed_uint(s, 11, 2, h) || !detail::parse_fixed_uint(s, 14, 2, mi) ||
        !detail::parse_fixed_uint(s, 17, 2, se))
        return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60) return std::nullopt;

    std::size_t pos = 19;
    std::int64_t frac_ms = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        std::int64_t scale = 100;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            if (digits < 3) frac_ms += (s[pos] - '0') * scale;
            scale /= 10;
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
    }
    if (pos >= s.size()) return std::nullopt;

    std::int64_t offset_min = 0;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        if (pos + 1 != s.size()) return std::nullopt;
    } else if (s[pos] == '+' || s[pos] == '-') {
        const int sign = s[pos] == '+' ? 1 : -1;
        int oh, om;
        if (pos + 6 != s.size() || s[pos + 3] != ':') return std::nullopt;
        if (!detail::parse_fixed_uint(s, pos + 1, 2, oh) || !detail::parse_fixed_uint(s, pos + 4, 2, om))
            return std::nullopt;
        if (oh > 23 || om > 59) return std::nullopt;
        offset_min = sign * (oh * 60 + om);
    } else {
        return std::nullopt;
    }

    const std::int64_t days = days_from_civil(y, mo, d);
    std::int64_t ms = days * kMsPerDay + h * kMsPerHour + mi * kMsPerMinute + se * kMsPerSecond + frac_ms;
    ms -= offset_min * kMsPerMinute;
    return ms;
}

/// Formats UTC milliseconds as RFC 3339 with a trailing Z. Fractional
/// milliseconds are emitted only when nonzero.
inline std::string format_rfc3339_utc(std::int64_t ms) {
    std::int64_t days = ms / kMsPerDay;
    std::int64_t rem = ms % kMsPerDay;
    if (rem < 0) {
        rem += kMsPerDay;
        --days;
    }
    const CivilDate cd = civil_from_days(days);
    const int h = static_cast<int>(rem / kMsPerHour);
    const int mi = static_cast<int>(rem % kMsPerHour / kMsPerMinute);
    const int se = static_cast<int>(rem % kMsPerMinute / kMsPerSecond);
    const int frac = static_cast<int>(rem % kMsPerSecond);
    char buf[40];
    if (frac == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", cd.year, cd.month, cd.day, h, mi, se);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", cd.year, cd.month, cd.day, h, mi,
                      se, frac);
    }
    return buf;
}

/// "HH:MM" or "HH:MM:SS" to milliseconds since midnight.
inline std::optional<std::int64_t> parse_clock_ms(std::string_view s) {
    int h, mi, se = 0;
    if (s.size() != 5 && s.size() != 8) return std::nullopt;
    if (!detail::parse_fixed_uint(s, 0, 2, h) || s[2] != ':' || !detail::parse_fixed_uint(s, 3, 2, mi))
        return std::nullopt;
    if (s.size() == 8) {
        if (s[5] != ':' || !detail::parse_fixed_uint(s, 6, 2, se)) return std::nullopt;
    }
    if (h > 23 || mi > 59 || se > 59) return std::nullopt;
    return h * kMsPerHour + mi * kMsPerMinute + se * kMsPerSecond;
}

/// Milliseconds since midnight to "HH:MM", truncated to the minute.
/// Times past 24h wrap for display.
inline std::string format_clock_hhmm(std::int64_t ms_of_day) {
    const std::int64_t minutes = ms_of_day / kMsPerMinute;
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", static_cast<int>(minutes / 60 % 24),
                  static_cast<int>(minutes % 60));
    return buf;
}

inline std::string format_clock_hhmmss(std::int64_t ms_of_day) {
    const std::int64_t seconds = ms_of_day / kMsPerSecond;
    char buf[12];
    std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", static_cast<int>(seconds / 3600 % 24),
                  static_cast<int>(seconds / 60 % 60), static_cast<int>(seconds % 60));
    return buf;
}

inline std::string format_civil_date(std::int64_t ms_utc) {
    std::int64_t days = ms_utc / kMsPerDay;
    if (ms_utc % kMsPerDay < 0) --days;
    const CivilDate cd = civil_from_days(days);
    char buf[12];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", cd.year, cd.month, cd.day);
    return buf;
}

/// "YYYY-MM-DD" to UTC milliseconds at midnight.
inline std::optional<std::int64_t> parse_civil_date_ms(std::string_view s) {
    int y, m, d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!detail::parse_fixed_uint(s, 0, 4, y) || !detail::parse_fixed_uint(s, 5, 2, m) ||
        !detail::parse_fixed_uint(s, 8, 2, d))
        return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    return days_from_civil(y, m, d) * kMsPerDay;
}

}  // namespace geodiary
