#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geodiary/csv.hpp"
#include "geodiary/errors.hpp"
#include "geodiary/geo.hpp"
#include "geodiary/geocode.hpp"
#include "geodiary/mode.hpp"
#include "geodiary/router.hpp"
#include "geodiary/stops.hpp"
#include "geodiary/time.hpp"

namespace geodiary {

enum class DistanceKind { TrackMeasured, RouteInferred, RespondentReported };

inline const char* distance_kind_name(DistanceKind k) {
    switch (k) {
        case DistanceKind::TrackMeasured: return "TrackMeasured";
        case DistanceKind::RouteInferred: return "RouteInferred";
        case DistanceKind::RespondentReported: return "RespondentReported";
    }
    return "?";
}

inline std::optional<DistanceKind> parse_distance_kind(std::string_view s) {
    if (s == "TrackMeasured") return DistanceKind::TrackMeasured;
    if (s == "RouteInferred") return DistanceKind::RouteInferred;
    if (s == "RespondentReported") return DistanceKind::RespondentReported;
    return std::nullopt;
}

/// One diary row: a single trip. Times are local wall clock at full
/// resolution, expressed as milliseconds since local midnight of the
/// trip's day (the end may pass 24h for trips crossing midnight).
/// Emission truncates times to the minute and distance to whole meters;
/// the stored values stay unrounded.
struct DiaryEntry {
    std::string respondent_id;
    std::string day;      // calendar date, or an opaque diary day token
    std::string label;    // empty = absent
    std::string address;  // empty = absent
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    Mode transport = Mode::Unknown;
    double distance_m = 0.0;
    DistanceKind kind = DistanceKind::TrackMeasured;
    // Straight-line/routed distance between the trip's endpoints, kept
    // alongside the track distance for calibration.
    std::optional<double> route_inferred_m;
};

/// Transport mode from the median of per-segment speeds. Fewer than two
/// fixes cannot produce a speed and map to Unknown.
inline Mode infer_mode(std::span<const GeoPoint> trip_points, const ModeThresholds& th) {
    if (trip_points.size() < 2) return Mode::Unknown;
    return th.classify(median_speed_mps(trip_points));
}

/// Travel distance between two endpoints via the configured router.
inline double inferred_distance_m(const LatLon& origin, const LatLon& dest, Router& router,
                                  Mode mode = Mode::Unknown) {
    return router.distance_m(origin, dest, mode);
}

struct DiaryBuildOptions {
    const Gazetteer* gazetteer = nullptr;  // null: no geocoding, addresses stay absent
    ModeThresholds thresholds;
    Router* router = nullptr;  // null: great-circle
    bool fallback_to_great_circle = true;
    int tz_offset_min = 0;
};

/// Derives diary rows from segmentations: one row per trip segment.
///
/// The address and label come from reverse-geocoding the destination
/// stop's centroid; trips without a terminating stop get none. The
/// reported distance is the track length over the trip's fixes,
/// extended to the bounding stop centroids where those exist, so that
/// the measured route runs place to place rather than radius edge to
/// radius edge. The routed (or straight-line) distance between the same
/// endpoints is recorded alongside for calibration.
inline std::vector<DiaryEntry> build_diary(std::span<const Segmentation> segs,
                                           const DiaryBuildOptions& opts) {
    GreatCircleRouter fallback;
    Router* router = opts.router ? opts.router : static_cast<Router*>(&fallback);
    const std::int64_t tz_ms = static_cast<std::int64_t>(opts.tz_offset_min) * kMsPerMinute;

    std::vector<DiaryEntry> out;
    for (const Segmentation& seg : segs) {
        for (std::size_t t = 0; t < seg.trips.size(); ++t) {
            const TripSegment& trip = seg.trips[t];
            const std::span<const GeoPoint> pts = seg.trip_points(t);

            DiaryEntry e;
            e.respondent_id = seg.respondent_id;

            const LatLon origin = trip.origin_stop ? seg.stops[*trip.origin_stop].centroid
                                                   : pts.front().location();
            const LatLon dest = trip.dest_stop ? seg.stops[*trip.dest_stop].centroid
                                               : pts.back().location();

            if (trip.dest_stop && opts.gazetteer) {
                if (const auto match = reverse_geocode(dest, *opts.gazetteer)) {
                    e.address = match->address;
                    e.label = match->label;
                }
            }

            e.transport = infer_mode(pts, opts.thresholds);

            double track = track_length_m(pts);
            if (trip.origin_stop) track += haversine_m(origin, pts.front().location());
            if (trip.dest_stop) track += haversine_m(pts.back().location(), dest);
            e.distance_m = track;
            e.kind = DistanceKind::TrackMeasured;

            try {
                e.route_inferred_m = router->distance_m(origin, dest, e.transport);
            } catch (const RouterUnavailable&) {
                if (!opts.fallback_to_great_circle) throw;
                e.route_inferred_m = haversine_m(origin, dest);
            }

            const std::int64_t local_start = trip.start_ms + tz_ms;
            std::int64_t day_start = local_start / kMsPerDay * kMsPerDay;
            if (local_start < 0 && local_start % kMsPerDay != 0) day_start -= kMsPerDay;
            e.day = format_civil_date(local_start);
            e.start_ms = local_start - day_start;
            e.end_ms = trip.end_ms + tz_ms - day_start;
            out.push_back(std::move(e));
        }
    }
    std::sort(out.begin(), out.end(), [](const DiaryEntry& a, const DiaryEntry& b) {
        return std::tie(a.respondent_id, a.day, a.start_ms) < std::tie(b.respondent_id, b.day, b.start_ms);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Diary file formats.
//
// Pipeline output ("app diary"):
//   respondent_id,day,label,address,trip_start,trip_end,transport_method,distance_m,distance_kind
// Traditional diary input (respondent-reported, no kind column):
//   respondent_id,day,label,address,trip_start,trip_end,transport_method,distance_m

inline constexpr const char* kDiaryHeader =
    "respondent_id,day,label,address,trip_start,trip_end,transport_method,distance_m,distance_kind";
inline constexpr const char* kTraditionalDiaryHeader =
    "respondent_id,day,label,address,trip_start,trip_end,transport_method,distance_m";

inline std::string write_diary_csv(std::span<const DiaryEntry> entries) {
    std::string out = std::string(kDiaryHeader) + "\n";
    for (const DiaryEntry& e : entries) {
        out += e.respondent_id;
        out += ',';
        out += e.day;
        out += ',';
        out += e.label;
        out += ',';
        out += e.address;
        out += ',';
        out += format_clock_hhmm(e.start_ms);
        out += ',';
        out += format_clock_hhmm(e.end_ms);
        out += ',';
        out += mode_name(e.transport);
        out += ',';
        out += std::to_string(std::llround(e.distance_m));
        out += ',';
        out += distance_kind_name(e.kind);
        out += '\n';
    }
    return out;
}

namespace detail {

inline DiaryEntry parse_diary_fields(const std::vector<std::string>& f, std::size_t row,
                                     std::optional<DistanceKind> forced_kind) {
    DiaryEntry e;
    if (f[0].empty()) throw SchemaViolation("empty respondent_id", row, "respondent_id");
    if (f[1].empty()) throw SchemaViolation("empty day", row, "day");
    e.respondent_id = f[0];
    e.day = f[1];
    e.label = f[2];
    e.address = f[3];
    const std::optional<std::int64_t> start = parse_clock_ms(f[4]);
    if (!start) throw SchemaViolation("bad time '" + f[4] + "'", row, "trip_start");
    const std::optional<std::int64_t> end = parse_clock_ms(f[5]);
    if (!end) throw SchemaViolation("bad time '" + f[5] + "'", row, "trip_end");
    e.start_ms = *start;
    e.end_ms = *end;
    if (e.end_ms <= e.start_ms) throw SchemaViolation("trip_end not after trip_start", row, "trip_end");
    const std::optional<Mode> mode = parse_mode(f[6]);
    if (!mode) throw SchemaViolation("unknown transport_method '" + f[6] + "'", row, "transport_method");
    e.transport = *mode;
    try {
        e.distance_m = std::stod(f[7]);
    } catch (const std::exception&) {
        throw SchemaViolation("bad distance '" + f[7] + "'", row, "distance_m");
    }
    if (e.distance_m < 0.0) throw SchemaViolation("negative distance", row, "distance_m");
    if (forced_kind) {
        e.kind = *forced_kind;
    } else {
        const std::optional<DistanceKind> kind = parse_distance_kind(f[8]);
        if (!kind) throw SchemaViolation("unknown distance_kind '" + f[8] + "'", row, "distance_kind");
        e.kind = *kind;
    }
    return e;
}

}  // namespace detail

inline std::vector<DiaryEntry> read_diary_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    require_header(lines, kDiaryHeader, path);
    std::vector<DiaryEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != 9) throw SchemaViolation("expected 9 fields", i + 1, "row");
        out.push_back(detail::parse_diary_fields(f, i + 1, std::nullopt));
    }
    return out;
}

inline std::vector<DiaryEntry> read_traditional_diary_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    require_header(lines, kTraditionalDiaryHeader, path);
    std::vector<DiaryEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != 8) throw SchemaViolation("expected 8 fields", i + 1, "row");
        out.push_back(detail::parse_diary_fields(f, i + 1, DistanceKind::RespondentReported));
    }
    return out;
}

/// Distance pairs (track-measured vs route-inferred) for calibration.
/// Format: `actual_m,inferred_m`, full precision.
inline std::string write_pairs_csv(std::span<const DiaryEntry> entries) {
    std::string out = "actual_m,inferred_m\n";
    for (const DiaryEntry& e : entries) {
        if (!e.route_inferred_m) continue;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f,%.3f\n", e.distance_m, *e.route_inferred_m);
        out += buf;
    }
    return out;
}

inline std::vector<std::pair<double, double>> read_pairs_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    require_header(lines, "actual_m,inferred_m", path);
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != 2) throw SchemaViolation("expected 2 fields", i + 1, "row");
        try {
            out.emplace_back(std::stod(f[0]), std::stod(f[1]));
        } catch (const std::exception&) {
            throw SchemaViolation("bad number", i + 1, "actual_m");
        }
    }
    return out;
}

}  // namespace geodiary
