#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace geodiary {

/// Spherical earth model. The sub-0.5% error of a sphere against the
/// ellipsoid is negligible at trip scale.
constexpr double kEarthRadiusM = 6'371'000.0;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// A WGS84 coordinate without a timestamp.
struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

/// One location fix: WGS84 coordinate plus a UTC instant in
/// milliseconds since the epoch.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
    std::int64_t t_ms = 0;

    LatLon location() const { return {lat, lon}; }
};

inline bool valid_lat(double lat) { return lat >= -90.0 && lat <= 90.0; }
inline bool valid_lon(double lon) { return lon >= -180.0 && lon <= 180.0; }

/// Great-circle distance in meters on the spherical earth.
inline double haversine_m(const LatLon& a, const LatLon& b) {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dphi = deg_to_rad(b.lat - a.lat);
    const double dlam = deg_to_rad(b.lon - a.lon);
    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlam / 2.0);
    double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    // guard rounding at the ends of the range
    if (h > 1.0) h = 1.0;
    if (h < 0.0) h = 0.0;
    return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

inline double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    return haversine_m(a.location(), b.location());
}

/// Length of the polyline through the given fixes: sum of great-circle
/// distances over consecutive pairs. Zero for fewer than two points.
inline double track_length_m(std::span<const GeoPoint> points) {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) total += haversine_m(points[i - 1], points[i]);
    return total;
}

inline double track_length_m(std::span<const LatLon> points) {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) total += haversine_m(points[i - 1], points[i]);
    return total;
}

/// Displaces a coordinate by local east/north meters in the tangent
/// plane at `origin`. The planar approximation drifts quadratically
/// with the offset (roughly d^2*tan(lat)/2R, about 1.3 m at 5 km for
/// mid latitudes), which is adequate at trip scale.
inline LatLon offset_m(const LatLon& origin, double east_m, double north_m) {
    const double dlat = rad_to_deg(north_m / kEarthRadiusM);
    const double dlon = rad_to_deg(east_m / (kEarthRadiusM * std::cos(deg_to_rad(origin.lat))));
    return {origin.lat + dlat, origin.lon + dlon};
}

}  // namespace geodiary
