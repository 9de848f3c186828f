#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodiary/geo.hpp"
#include "geodiary/time.hpp"
#include "geodiary/trace.hpp"

namespace geodiary {

/// Clustering parameters for stop detection: a stop is a window of at
/// least `min_duration_s` during which every fix stays within
/// `radius_m` of the window's first fix.
struct StopParams {
    double radius_m = 50.0;
    double min_duration_s = 300.0;
};

/// A detected stationary period. `first`/`last` are inclusive indices
/// into the owning segmentation's point vector. Membership is measured
/// from the anchor (the originating fix); the centroid is the
/// arithmetic mean of member coordinates and is reported for geocoding
/// and routing, not used for membership.
struct Stop {
    std::size_t first = 0;
    std::size_t last = 0;
    LatLon centroid;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    GeoPoint anchor;
};

/// A maximal run of fixes not belonging to any stop. Bounding stops are
/// recorded by index where they exist; a leading trip has no origin
/// stop and a trailing trip no destination stop.
struct TripSegment {
    std::size_t first = 0;
    std::size_t last = 0;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::optional<std::size_t> origin_stop;
    std::optional<std::size_t> dest_stop;
};

/// Exact partition of one SubTrace into stops and trips: every input
/// fix belongs to exactly one Stop or one TripSegment.
struct Segmentation {
    std::string respondent_id;
    std::size_t first_index = 0;
    std::vector<GeoPoint> points;
    std::vector<Stop> stops;
    std::vector<TripSegment> trips;

    std::span<const GeoPoint> stop_points(std::size_t i) const {
        return {points.data() + stops[i].first, stops[i].last - stops[i].first + 1};
    }
    std::span<const GeoPoint> trip_points(std::size_t i) const {
        return {points.data() + trips[i].first, trips[i].last - trips[i].first + 1};
    }
};

/// Forward-scan anchor clustering of a geolocation stream.
///
/// From anchor index i, find the smallest j > i whose fix lies farther
/// than radius_m from fix i. If t[j-1] - t[i] >= min_duration_s the
/// window [i, j-1] is emitted as a Stop and the scan resumes at j;
/// otherwise the anchor advances by one. When no excursion exists the
/// trailing window closes as a Stop if it satisfies the duration rule
/// (boundary counts: == min_duration_s is a stop). Fixes not absorbed
/// into stops are grouped into maximal contiguous runs, one TripSegment
/// each; a single-fix SubTrace therefore yields one trip of duration 0.
inline Segmentation detect_stops(const SubTrace& sub, const StopParams& params) {
    if (sub.points.empty()) throw std::invalid_argument("detect_stops: empty SubTrace");
    if (params.radius_m <= 0.0 || params.min_duration_s <= 0.0)
        throw std::invalid_argument("detect_stops: parameters must be positive");

    const std::vector<GeoPoint>& p = sub.points;
    const std::size_t n = p.size();
    const std::int64_t min_dur_ms = static_cast<std::int64_t>(params.min_duration_s * 1000.0);

    Segmentation seg;
    seg.respondent_id = sub.respondent_id;
    seg.first_index = sub.first_index;
    seg.points = sub.points;

    std::vector<bool> in_stop(n, false);
    const auto emit_stop = [&](std::size_t first, std::size_t last) {
        Stop s;
        s.first = first;
        s.last = last;
        s.anchor = p[first];
        s.start_ms = p[first].t_ms;
        s.end_ms = p[last].t_ms;
        double lat = 0.0, lon = 0.0;
        for (std::size_t k = first; k <= last; ++k) {
            lat += p[k].lat;
            lon += p[k].lon;
            in_stop[k] = true;
        }
        const double m = static_cast<double>(last - first + 1);
        s.centroid = {lat / m, lon / m};
        seg.stops.push_back(s);
    };

    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && haversine_m(p[i], p[j]) <= params.radius_m) ++j;
        if (j == n) {
            // no excursion before end of trace
            if (p[n - 1].t_ms - p[i].t_ms >= min_dur_ms) emit_stop(i, n - 1);
            break;
        }
        if (p[j - 1].t_ms - p[i].t_ms >= min_dur_ms) {
            emit_stop(i, j - 1);
            i = j;
        } else {
            ++i;
        }
    }

    // group the remaining fixes into trips and link bounding stops
    std::size_t k = 0;
    while (k < n) {
        if (in_stop[k]) {
            ++k;
            continue;
        }
        TripSegment t;
        t.first = k;
        while (k < n && !in_stop[k]) ++k;
        t.last = k - 1;
        t.start_ms = p[t.first].t_ms;
        t.end_ms = p[t.last].t_ms;
        seg.trips.push_back(t);
    }
    for (TripSegment& t : seg.trips) {
        for (std::size_t s = 0; s < seg.stops.size(); ++s) {
            if (seg.stops[s].last + 1 == t.first) t.origin_stop = s;
            if (t.last + 1 == seg.stops[s].first) t.dest_stop = s;
        }
    }
    return seg;
}

/// Gap-splits a trace, then runs stop detection on each piece. No stop
/// or trip ever spans a gap larger than `max_gap_s`.
inline std::vector<Segmentation> segment_trace(const Trace& trace, const StopParams& params,
                                               double max_gap_s) {
    std::vector<Segmentation> out;
    for (const SubTrace& sub : split_on_gaps(trace, max_gap_s)) out.push_back(detect_stops(sub, params));
    return out;
}

/// Per-point classification dump (`respondent_id,timestamp,class,cluster_index`)
/// for inspecting what the clustering did. Stop and trip indices run
/// per respondent across segmentations.
inline std::string write_point_classes_csv(std::span<const Segmentation> segs) {
    std::string out = "respondent_id,timestamp,class,cluster_index\n";
    std::string current;
    std::size_t stop_base = 0, trip_base = 0;
    for (const Segmentation& seg : segs) {
        if (seg.respondent_id != current) {
            current = seg.respondent_id;
            stop_base = trip_base = 0;
        }
        std::vector<std::pair<char, std::size_t>> cls(seg.points.size());
        for (std::size_t s = 0; s < seg.stops.size(); ++s)
            for (std::size_t k = seg.stops[s].first; k <= seg.stops[s].last; ++k)
                cls[k] = {'S', stop_base + s};
        for (std::size_t t = 0; t < seg.trips.size(); ++t)
            for (std::size_t k = seg.trips[t].first; k <= seg.trips[t].last; ++k)
                cls[k] = {'T', trip_base + t};
        for (std::size_t k = 0; k < seg.points.size(); ++k) {
            out += seg.respondent_id;
            out += ',';
            out += format_rfc3339_utc(seg.points[k].t_ms);
            out += cls[k].first == 'S' ? ",STOP," : ",TRIP,";
            out += std::to_string(cls[k].second);
            out += '\n';
        }
        stop_base += seg.stops.size();
        trip_base += seg.trips.size();
    }
    return out;
}

}  // namespace geodiary
