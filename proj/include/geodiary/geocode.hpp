#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geodiary/csv.hpp"
#include "geodiary/errors.hpp"
#include "geodiary/geo.hpp"

namespace geodiary {

struct GazetteerEntry {
    double lat = 0.0;
    double lon = 0.0;
    std::string address;
    std::string label;  // empty = no label
};

/// Offline reverse-geocoding table. File format:
/// `lat,lon,address,label` with an optional empty label.
struct Gazetteer {
    std::vector<GazetteerEntry> entries;
    double match_radius_m = 100.0;
};

inline Gazetteer load_gazetteer(const std::string& path, double match_radius_m = 100.0) {
    const std::vector<std::string> lines = read_lines(path);
    require_header(lines, "lat,lon,address,label", path);
    Gazetteer g;
    g.match_radius_m = match_radius_m;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != 4) throw SchemaViolation("gazetteer: expected 4 fields", i + 1, "row");
        GazetteerEntry e;
        try {
            e.lat = std::stod(f[0]);
            e.lon = std::stod(f[1]);
        } catch (const std::exception&) {
            throw SchemaViolation("gazetteer: bad coordinate", i + 1, "lat");
        }
        if (!valid_lat(e.lat) || !valid_lon(e.lon))
            throw SchemaViolation("gazetteer: coordinate out of range", i + 1, "lat");
        if (f[2].empty()) throw SchemaViolation("gazetteer: empty address", i + 1, "address");
        e.address = f[2];
        e.label = f[3];
        g.entries.push_back(std::move(e));
    }
    return g;
}

struct GeocodeMatch {
    std::string address;
    std::string label;
    double distance_m = 0.0;
};

/// Nearest gazetteer entry within the match radius; ties broken by file
/// order. Absence of a match is a value, not an error.
inline std::optional<GeocodeMatch> reverse_geocode(const LatLon& loc, const Gazetteer& g) {
    std::optional<GeocodeMatch> best;
    for (const GazetteerEntry& e : g.entries) {
        const double d = haversine_m(loc, {e.lat, e.lon});
        if (d > g.match_radius_m) continue;
        if (!best || d < best->distance_m) best = GeocodeMatch{e.address, e.label, d};
    }
    return best;
}

}  // namespace geodiary
