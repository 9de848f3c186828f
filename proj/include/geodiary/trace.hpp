#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geodiary/csv.hpp"
#include "geodiary/errors.hpp"
#include "geodiary/geo.hpp"
#include "geodiary/time.hpp"

namespace geodiary {

/// One respondent's geolocation stream, timestamps strictly increasing.
struct Trace {
    std::string respondent_id;
    std::vector<GeoPoint> points;
};

/// A contiguous slice of a Trace produced by gap splitting.
/// `first_index` is the position of points[0] within the parent Trace.
struct SubTrace {
    std::string respondent_id;
    std::size_t first_index = 0;
    std::vector<GeoPoint> points;
};

enum class TraceErrorKind {
    MalformedRow,
    CoordinateOutOfRange,
    NonMonotoneTimestamp,
    DuplicateTimestamp,
    EmptyTrace,
};

inline const char* trace_error_name(TraceErrorKind k) {
    switch (k) {
        case TraceErrorKind::MalformedRow: return "MalformedRow";
        case TraceErrorKind::CoordinateOutOfRange: return "CoordinateOutOfRange";
        case TraceErrorKind::NonMonotoneTimestamp: return "NonMonotoneTimestamp";
        case TraceErrorKind::DuplicateTimestamp: return "DuplicateTimestamp";
        case TraceErrorKind::EmptyTrace: return "EmptyTrace";
    }
    return "?";
}

struct TraceError {
    TraceErrorKind kind;
    std::size_t row;  // 1-based file row (header is row 1); 0 if not row-specific
    std::string message;
};

/// A raw input row as parsed from the location file, prior to validation.
struct RawLocationRow {
    std::string respondent_id;
    std::int64_t t_ms = 0;
    double lat = 0.0;
    double lon = 0.0;
    std::size_t row = 0;  // 1-based file row
};

struct TraceValidation {
    std::optional<Trace> trace;
    std::vector<TraceError> errors;

    bool ok() const { return errors.empty(); }
};

/// Validates one respondent's rows (in file order) and assembles a
/// Trace. On failure the error list is complete: every offending row is
/// reported, not just the first.
inline TraceValidation validate_trace(const std::string& respondent_id,
                                      std::span<const RawLocationRow> rows) {
    TraceValidation out;
    if (rows.empty()) {
        out.errors.push_back({TraceErrorKind::EmptyTrace, 0, respondent_id + ": no location rows"});
        return out;
    }
    Trace trace;
    trace.respondent_id = respondent_id;
    trace.points.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const RawLocationRow& r = rows[i];
        if (!valid_lat(r.lat) || !valid_lon(r.lon)) {
            out.errors.push_back({TraceErrorKind::CoordinateOutOfRange, r.row,
                                  respondent_id + ": coordinate out of range"});
            continue;
        }
        if (i > 0) {
            if (r.t_ms == rows[i - 1].t_ms) {
                out.errors.push_back(
                    {TraceErrorKind::DuplicateTimestamp, r.row, respondent_id + ": duplicate timestamp"});
                continue;
            }
            if (r.t_ms < rows[i - 1].t_ms) {
                out.errors.push_back({TraceErrorKind::NonMonotoneTimestamp, r.row,
                                      respondent_id + ": timestamp decreases"});
                continue;
            }
        }
        trace.points.push_back({r.lat, r.lon, r.t_ms});
    }
    if (out.errors.empty()) out.trace = std::move(trace);
    return out;
}

/// Splits a trace at every consecutive pair with a time gap larger than
/// `max_gap_s`. Concatenating the result reproduces the input exactly.
inline std::vector<SubTrace> split_on_gaps(const Trace& trace, double max_gap_s) {
    const std::int64_t max_gap_ms = static_cast<std::int64_t>(max_gap_s * 1000.0);
    std::vector<SubTrace> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= trace.points.size(); ++i) {
        const bool cut = i == trace.points.size() ||
                         trace.points[i].t_ms - trace.points[i - 1].t_ms > max_gap_ms;
        if (!cut) continue;
        SubTrace st;
        st.respondent_id = trace.respondent_id;
        st.first_index = start;
        st.points.assign(trace.points.begin() + start, trace.points.begin() + i);
        out.push_back(std::move(st));
        start = i;
    }
    return out;
}

/// Median of the per-segment speeds haversine/dt. Requires at least two
/// points with strictly increasing timestamps.
inline double median_speed_mps(std::span<const GeoPoint> points) {
    if (points.size() < 2) throw TooFewPoints("median_speed_mps: need at least 2 points");
    std::vector<double> speeds;
    speeds.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double dt = static_cast<double>(points[i].t_ms - points[i - 1].t_ms) / 1000.0;
        speeds.push_back(haversine_m(points[i - 1], points[i]) / dt);
    }
    std::sort(speeds.begin(), speeds.end());
    const std::size_t n = speeds.size();
    return n % 2 == 1 ? speeds[n / 2] : 0.5 * (speeds[n / 2 - 1] + speeds[n / 2]);
}

// ---------------------------------------------------------------------------
// Raw-location file format: header `respondent_id,timestamp,lat,lon`,
// RFC 3339 timestamps, decimal degrees. Rows of different respondents
// may interleave; within one respondent rows must be chronological.

struct LocationFile {
    // respondents in id order, rows per respondent in file order
    std::vector<std::pair<std::string, std::vector<RawLocationRow>>> respondents;
    std::vector<TraceError> parse_errors;
};

inline LocationFile read_locations_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    require_header(lines, "respondent_id,timestamp,lat,lon", path);
    LocationFile out;
    std::map<std::string, std::vector<RawLocationRow>> groups;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::size_t row = i + 1;
        const std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != 4 || f[0].empty()) {
            out.parse_errors.push_back({TraceErrorKind::MalformedRow, row, "expected 4 fields"});
            continue;
        }
        const std::optional<std::int64_t> t = parse_rfc3339_ms(f[1]);
        if (!t) {
            out.parse_errors.push_back({TraceErrorKind::MalformedRow, row, "bad timestamp '" + f[1] + "'"});
            continue;
        }
        double lat, lon;
        try {
            std::size_t used1 = 0, used2 = 0;
            lat = std::stod(f[2], &used1);
            lon = std::stod(f[3], &used2);
            if (used1 != f[2].size() || used2 != f[3].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            out.parse_errors.push_back({TraceErrorKind::MalformedRow, row, "bad coordinate"});
            continue;
        }
        groups[f[0]].push_back({f[0], *t, lat, lon, row});
    }
    for (auto& [id, rows] : groups) out.respondents.emplace_back(id, std::move(rows));
    return out;
}

inline std::string locations_csv_header() { return "respondent_id,timestamp,lat,lon"; }

inline void append_location_row(std::string& out, const std::string& respondent_id, const GeoPoint& p) {
    char buf[96];
    std::snprintf(buf, sizeof buf, ",%.7f,%.7f\n", p.lat, p.lon);
    out += respondent_id;
    out += ',';
    out += format_rfc3339_utc(p.t_ms);
    out += buf;
}

inline std::string write_locations_csv(const Trace& trace) {
    std::string out = locations_csv_header() + "\n";
    for (const GeoPoint& p : trace.points) append_location_row(out, trace.respondent_id, p);
    return out;
}

}  // namespace geodiary
