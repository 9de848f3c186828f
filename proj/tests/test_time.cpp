#include <catch2/catch_amalgamated.hpp>

#include "geodiary/time.hpp"

using namespace geodiary;

TEST_CASE("rfc3339 round trip", "[time]") {
    const auto ms = parse_rfc3339_ms("2024-05-14T08:35:00Z");
    REQUIRE(ms.has_value());
    CHECK(format_rfc3339_utc(*ms) == "2024-05-14T08:35:00Z");
    CHECK(*ms % kMsPerDay == 8 * kMsPerHour + 35 * kMsPerMinute);
}

TEST_CASE("rfc3339 honors offsets then discards them", "[time]") {
    const auto utc = parse_rfc3339_ms("2024-05-14T10:35:00+02:00");
    REQUIRE(utc.has_value());
    CHECK(format_rfc3339_utc(*utc) == "2024-05-14T08:35:00Z");
    const auto west = parse_rfc3339_ms("2024-05-14T04:05:00-04:30");
    REQUIRE(west.has_value());
    CHECK(format_rfc3339_utc(*west) == "2024-05-14T08:35:00Z");
}

TEST_CASE("rfc3339 fractional seconds", "[time]") {
    const auto ms = parse_rfc3339_ms("2024-05-14T08:35:00.250Z");
    REQUIRE(ms.has_value());
    CHECK(*ms % 1000 == 250);
    CHECK(format_rfc3339_utc(*ms) == "2024-05-14T08:35:00.250Z");
}

TEST_CASE("rfc3339 rejects malformed input", "[time]") {
    CHECK_FALSE(parse_rfc3339_ms("2024-05-14 08:35").has_value());
    CHECK_FALSE(parse_rfc3339_ms("2024-13-14T08:35:00Z").has_value());
    CHECK_FALSE(parse_rfc3339_ms("2024-05-14T08:61:00Z").has_value());
    CHECK_FALSE(parse_rfc3339_ms("2024-05-14T08:35:00").has_value());
    CHECK_FALSE(parse_rfc3339_ms("garbage").has_value());
}

TEST_CASE("civil date conversions agree with known anchors", "[time]") {
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(2024, 5, 14) == 19857);
    const CivilDate cd = civil_from_days(19857);
    CHECK(cd.year == 2024);
    CHECK(cd.month == 5);
    CHECK(cd.day == 14);
    CHECK(format_civil_date(19857 * kMsPerDay + 123) == "2024-05-14");
    CHECK(parse_civil_date_ms("2024-05-14") == 19857 * kMsPerDay);
}

TEST_CASE("clock parsing and minute truncation", "[time]") {
    CHECK(parse_clock_ms("08:35") == 8 * kMsPerHour + 35 * kMsPerMinute);
    CHECK(parse_clock_ms("08:35:50") == 8 * kMsPerHour + 35 * kMsPerMinute + 50 * kMsPerSecond);
    CHECK_FALSE(parse_clock_ms("8:35").has_value());
    CHECK_FALSE(parse_clock_ms("24:00").has_value());
    CHECK(format_clock_hhmm(8 * kMsPerHour + 43 * kMsPerMinute + 59 * kMsPerSecond + 999) == "08:43");
    CHECK(format_clock_hhmmss(8 * kMsPerHour + 43 * kMsPerMinute + 5 * kMsPerSecond) == "08:43:05");
}
