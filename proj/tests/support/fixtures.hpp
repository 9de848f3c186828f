#pragma once

// Shared test fixtures: the example-day sensor trace whose detection
// output is pinned row by row, the matching gazetteer, the 20-trip
// scenario, and a randomized trace generator for property tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geodiary/geo.hpp"
#include "geodiary/geocode.hpp"
#include "geodiary/simulate.hpp"
#include "geodiary/time.hpp"
#include "geodiary/trace.hpp"

namespace fixtures {

using geodiary::GeoPoint;
using geodiary::LatLon;
using geodiary::Trace;

inline LatLon example_home() { return {52.09, 5.12}; }
inline LatLon example_school() { return geodiary::offset_m(example_home(), 210.0, 0.0); }

/// Somewhere north between home and school such that the two outbound
/// legs measure 220 m + 210 m while home and school sit 210 m apart.
inline LatLon example_via() {
    const double east = 48400.0 / 420.0;
    return geodiary::offset_m(example_home(), east, std::sqrt(48400.0 - east * east));
}

/// The morning slice of the example day as a sensor would record it:
/// a 50-second dwell at home (too short to register as a stop), a
/// 430 m detour walk to the school, an 8-minute dwell there, a 210 m
/// direct walk back, and a closing dwell at home. Fix placement is
/// engineered so the detected trips span 08:35-08:43 and 08:51-08:53
/// and the stop centroids land exactly on the school and home.
inline Trace worked_example_sensor_trace() {
    const LatLon home = example_home();
    const LatLon school = example_school();
    const LatLon via = example_via();

    const std::int64_t midnight = *geodiary::parse_civil_date_ms("2024-05-14");
    const auto at = [&](int h, int m, int s) {
        return midnight + (h * 3600 + m * 60 + s) * geodiary::kMsPerSecond;
    };
    // planar frame anchored at home: school = (210, 0), via per example_via
    const double vx = 48400.0 / 420.0;
    const double vy = std::sqrt(48400.0 - vx * vx);
    const auto outbound = [&](double arc) {  // arc in [0, 430] along home -> via -> school
        if (arc <= 220.0) {
            const double f = arc / 220.0;
            return geodiary::offset_m(home, vx * f, vy * f);
        }
        const double f = (arc - 220.0) / 210.0;
        return geodiary::offset_m(home, vx + (210.0 - vx) * f, vy * (1.0 - f));
    };
    const auto inbound = [&](double arc) {  // arc in [0, 210] along school -> home
        return geodiary::offset_m(home, 210.0 - arc, 0.0);
    };

    Trace t;
    t.respondent_id = "r1";
    const auto add = [&](const LatLon& p, std::int64_t ms) { t.points.push_back({p.lat, p.lon, ms}); };

    for (int k = 0; k < 5; ++k) add(home, at(8, 35, 0) + k * 10000);                    // brief dwell
    for (int k = 0; k <= 25; ++k) add(outbound(8.8 * k), at(8, 35, 50) + k * 10000);    // leg 1, ends at via
    for (int k = 1; k <= 18; ++k) add(outbound(220.0 + 150.0 / 18.0 * k), at(8, 40, 0) + k * 10000);
    add(outbound(375.0), at(8, 43, 5));                                                 // last fix out of radius
    for (int k = 0; k < 47; ++k) add(school, at(8, 43, 15) + k * 10000);                // school dwell
    for (int k = 0; k <= 12; ++k) add(inbound(55.0 + 100.0 / 12.0 * k), at(8, 51, 5) + k * 10000);
    for (int k = 0; k < 41; ++k) add(home, at(8, 53, 15) + k * 10000);                  // closing dwell
    return t;
}

inline geodiary::Gazetteer worked_example_gazetteer() {
    const LatLon home = example_home();
    const LatLon school = example_school();
    const LatLon work = geodiary::offset_m(home, 4000.0, -3323.0);
    geodiary::Gazetteer g;
    g.entries.push_back({school.lat, school.lon, "203 Main St.", "Son's school"});
    g.entries.push_back({home.lat, home.lon, "4 Church Ln.", "Home"});
    g.entries.push_back({work.lat, work.lon, "1 Factory Rd.", "Work"});
    return g;
}

/// A day of 20 trips over 21 places with mixed modes. Every trip routes
/// through a via point perpendicular to the midpoint at half the
/// straight-line separation, so each track measures sqrt(2) times its
/// straight line -- a purely multiplicative route-inference bias.
inline geodiary::Scenario twenty_trip_scenario() {
    using geodiary::Mode;
    const LatLon origin{52.05, 5.00};
    const Mode modes[20] = {Mode::Walk, Mode::Bike, Mode::Car,  Mode::Walk, Mode::Walk,
                            Mode::Bike, Mode::Car,  Mode::Walk, Mode::Bike, Mode::Walk,
                            Mode::Car,  Mode::Bike, Mode::Walk, Mode::Walk, Mode::Bike,
                            Mode::Car,  Mode::Walk, Mode::Bike, Mode::Walk, Mode::Car};
    const auto speed = [](Mode m) { return m == Mode::Walk ? 1.4 : m == Mode::Bike ? 4.5 : 13.0; };
    const auto chord = [&](int i, Mode m) {
        if (m == Mode::Walk) return 420.0 + 9.0 * i;
        if (m == Mode::Bike) return 1300.0 + 55.0 * i;
        return 4200.0 + 300.0 * i;
    };
    const double golden = geodiary::deg_to_rad(137.50776405);

    geodiary::Scenario sc;
    sc.name = "twenty_trips";
    sc.respondent_id = "r1";
    sc.date = "2024-05-15";
    const std::int64_t midnight = *geodiary::parse_civil_date_ms(sc.date);

    double e = 0.0, n = 0.0;
    std::int64_t t = midnight + 6 * geodiary::kMsPerHour;
    for (int i = 0; i <= 20; ++i) {
        geodiary::ScenarioStay stay;
        char label[16], addr[24];
        std::snprintf(label, sizeof label, "place_%02d", i);
        std::snprintf(addr, sizeof addr, "%d Example Rd.", i + 1);
        stay.label = label;
        stay.address = addr;
        const LatLon loc = geodiary::offset_m(origin, e, n);
        stay.lat = loc.lat;
        stay.lon = loc.lon;
        stay.start_ms = t;
        stay.end_ms = t + (600 + i * 37 % 300) * geodiary::kMsPerSecond;
        sc.stays.push_back(stay);
        if (i == 20) break;

        const Mode m = modes[i];
        const double c = chord(i, m);
        const double th = (i + 1) * golden;
        const double de = std::cos(th), dn = std::sin(th);
        // via at the midpoint pushed out perpendicular by c/2
        const double ve = e + c / 2.0 * de - c / 2.0 * dn;
        const double vn = n + c / 2.0 * dn + c / 2.0 * de;
        geodiary::ScenarioTrip trip;
        trip.mode = m;
        trip.vias.push_back(geodiary::offset_m(origin, ve, vn));
        sc.trips.push_back(trip);

        e += c * de;
        n += c * dn;
        const auto dur = static_cast<std::int64_t>(std::llround(c * std::sqrt(2.0) / speed(m)));
        t = sc.stays.back().end_ms + dur * geodiary::kMsPerSecond;
    }
    return sc;
}

/// Random traces alternating dwell and move phases, for property tests.
inline Trace random_trace(std::mt19937_64& rng, std::size_t max_points = 300) {
    std::uniform_int_distribution<int> phase_count(1, 6);
    std::uniform_int_distribution<int> phase_len(2, 40);
    std::uniform_real_distribution<double> jitter(-12.0, 12.0);
    std::uniform_real_distribution<double> step(5.0, 80.0);
    std::uniform_real_distribution<double> heading(0.0, 2.0 * 3.14159265358979);
    std::uniform_int_distribution<std::int64_t> dt_ms(1000, 120000);
    std::uniform_real_distribution<double> lat0(-60.0, 60.0), lon0(-179.0, 179.0);

    Trace t;
    t.respondent_id = "rnd";
    LatLon base{lat0(rng), lon0(rng)};
    std::int64_t now = 0;
    double e = 0.0, n = 0.0;
    const int phases = phase_count(rng);
    for (int p = 0; p < phases && t.points.size() < max_points; ++p) {
        const bool dwell = rng() % 2 == 0;
        const int len = phase_len(rng);
        const double th = heading(rng);
        for (int k = 0; k < len && t.points.size() < max_points; ++k) {
            if (dwell) {
                const LatLon loc = geodiary::offset_m(base, e + jitter(rng), n + jitter(rng));
                t.points.push_back({loc.lat, loc.lon, now});
            } else {
                e += step(rng) * std::cos(th);
                n += step(rng) * std::sin(th);
                const LatLon loc = geodiary::offset_m(base, e, n);
                t.points.push_back({loc.lat, loc.lon, now});
            }
            now += dt_ms(rng);
        }
    }
    if (t.points.empty()) {
        const LatLon loc = geodiary::offset_m(base, 0, 0);
        t.points.push_back({loc.lat, loc.lon, 0});
    }
    return t;
}

}  // namespace fixtures
