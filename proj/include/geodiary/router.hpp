#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "geodiary/errors.hpp"
#include "geodiary/geo.hpp"
#include "geodiary/mode.hpp"

namespace geodiary {

/// Computes the travel distance between two locations for a transport
/// mode. Implementations must be safe for concurrent calls.
class Router {
public:
    virtual ~Router() = default;
    virtual double distance_m(const LatLon& origin, const LatLon& dest, Mode mode) = 0;
};

/// Default router: great-circle distance between the endpoints,
/// ignoring the mode. Pure, no state.
class GreatCircleRouter : public Router {
public:
    double distance_m(const LatLon& origin, const LatLon& dest, Mode) override {
        return haversine_m(origin, dest);
    }
};

/// Remote routing over a plain text protocol:
///   GET {url}/route?olat=..&olon=..&dlat=..&dlon=..&mode=Walk
/// The response body is the distance in meters as a decimal number.
/// Responses are cached keyed by (origin, dest, mode) with coordinates
/// rounded to 1e-5 degrees; the cache is mutex-guarded.
class HttpRouter : public Router {
public:
    explicit HttpRouter(std::string url) : url_(std::move(url)) {}

    double distance_m(const LatLon& origin, const LatLon& dest, Mode mode) override;

private:
    using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t, int>;

    static std::int64_t quantize(double deg) { return std::llround(deg * 1e5); }

    std::string url_;
    std::mutex mutex_;
    std::map<Key, double> cache_;
};

}  // namespace geodiary

// The HTTP client is only pulled in by translation units that actually
// construct an HttpRouter.
#ifndef GEODIARY_NO_HTTP
#include <httplib.h>

namespace geodiary {

inline double HttpRouter::distance_m(const LatLon& origin, const LatLon& dest, Mode mode) {
    const Key key{quantize(origin.lat), quantize(origin.lon), quantize(dest.lat), quantize(dest.lon),
                  static_cast<int>(mode)};
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    httplib::Client client(url_);
    client.set_connection_timeout(5, 0);
    char query[160];
    std::snprintf(query, sizeof query, "/route?olat=%.7f&olon=%.7f&dlat=%.7f&dlon=%.7f&mode=%s", origin.lat,
                  origin.lon, dest.lat, dest.lon, mode_name(mode));
    const httplib::Result res = client.Get(query);
    if (!res || res->status != 200) throw RouterUnavailable("router at " + url_ + " unreachable");
    double value = 0.0;
    try {
        value = std::stod(res->body);
    } catch (const std::exception&) {
        throw RouterUnavailable("router at " + url_ + " returned malformed body '" + res->body + "'");
    }
    if (!(value >= 0.0)) throw RouterUnavailable("router returned negative distance");
    std::lock_guard<std::mutex> lock(mutex_);
    cache_[key] = value;
    return value;
}

}  // namespace geodiary
#endif
