#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "geodiary/csv.hpp"
#include "geodiary/diary.hpp"
#include "geodiary/errors.hpp"
#include "geodiary/geo.hpp"
#include "geodiary/geocode.hpp"
#include "geodiary/mode.hpp"
#include "geodiary/time.hpp"
#include "geodiary/trace.hpp"

namespace geodiary {

// ---------------------------------------------------------------------------
// Scenario: a scripted single-day itinerary. Structured key-value text,
// one [stay] or [trip] section per episode, strictly alternating and
// starting/ending with a stay. Trips take their endpoints and times
// from the flanking stays; optional `via` waypoints shape the route.

struct ScenarioStay {
    std::string label;
    std::string address;
    double lat = 0.0;
    double lon = 0.0;
    std::int64_t start_ms = 0;  // absolute UTC
    std::int64_t end_ms = 0;
};

struct ScenarioTrip {
    Mode mode = Mode::Walk;
    std::vector<LatLon> vias;
};

struct Scenario {
    std::string name;
    std::string respondent_id = "r1";
    std::string date;  // YYYY-MM-DD; stay clocks are on this date, UTC
    std::vector<ScenarioStay> stays;
    std::vector<ScenarioTrip> trips;
};

namespace detail {

inline std::pair<std::string, std::string> split_key_value(const std::string& line, std::size_t row) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw InvalidScenario("line " + std::to_string(row) + ": expected key = value");
    auto trim = [](std::string s) {
        const std::size_t a = s.find_first_not_of(" \t");
        const std::size_t b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    return {trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

inline LatLon parse_latlon_pair(const std::string& v, std::size_t row) {
    const std::size_t comma = v.find(',');
    if (comma == std::string::npos) throw InvalidScenario("line " + std::to_string(row) + ": expected lat,lon");
    try {
        const LatLon p{std::stod(v.substr(0, comma)), std::stod(v.substr(comma + 1))};
        if (!valid_lat(p.lat) || !valid_lon(p.lon))
            throw InvalidScenario("line " + std::to_string(row) + ": coordinate out of range");
        return p;
    } catch (const InvalidScenario&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidScenario("line " + std::to_string(row) + ": bad coordinate");
    }
}

}  // namespace detail

inline Scenario parse_scenario(const std::vector<std::string>& lines) {
    Scenario sc;
    std::optional<std::int64_t> date_midnight;
    enum class Section { Preamble, Stay, Trip } section = Section::Preamble;
    ScenarioStay stay;
    ScenarioTrip trip;
    bool stay_has[4] = {false, false, false, false};  // lat, lon, start, end
    char last_section = 'n';

    const auto close_section = [&]() {
        if (section == Section::Stay) {
            if (!(stay_has[0] && stay_has[1] && stay_has[2] && stay_has[3]))
                throw InvalidScenario("stay is missing lat/lon/start/end");
            sc.stays.push_back(stay);
        } else if (section == Section::Trip) {
            sc.trips.push_back(trip);
        }
    };

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t row = i + 1;
        std::string line = lines[i];
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        const std::size_t b = line.find_last_not_of(" \t");
        line = line.substr(a, b - a + 1);

        if (line == "[stay]" || line == "[trip]") {
            close_section();
            if (line == "[stay]") {
                if (last_section == 's') throw InvalidScenario("line " + std::to_string(row) + ": two consecutive stays");
                section = Section::Stay;
                stay = ScenarioStay{};
                stay_has[0] = stay_has[1] = stay_has[2] = stay_has[3] = false;
                last_section = 's';
            } else {
                if (last_section != 's') throw InvalidScenario("line " + std::to_string(row) + ": trip must follow a stay");
                section = Section::Trip;
                trip = ScenarioTrip{};
                last_section = 't';
            }
            continue;
        }

        const auto [key, value] = detail::split_key_value(line, row);
        if (section == Section::Preamble) {
            if (key == "name") sc.name = value;
            else if (key == "respondent") sc.respondent_id = value;
            else if (key == "date") {
                date_midnight = parse_civil_date_ms(value);
                if (!date_midnight) throw InvalidScenario("line " + std::to_string(row) + ": bad date");
                sc.date = value;
            } else throw InvalidScenario("line " + std::to_string(row) + ": unknown key '" + key + "'");
        } else if (section == Section::Stay) {
            if (key == "label") stay.label = value;
            else if (key == "address") stay.address = value;
            else if (key == "lat") { stay.lat = detail::parse_latlon_pair(value + ",0", row).lat; stay_has[0] = true; }
            else if (key == "lon") { stay.lon = detail::parse_latlon_pair("0," + value, row).lon; stay_has[1] = true; }
            else if (key == "start" || key == "end") {
                if (!date_midnight) throw InvalidScenario("date must precede stays");
                const std::optional<std::int64_t> clock = parse_clock_ms(value);
                if (!clock) throw InvalidScenario("line " + std::to_string(row) + ": bad time '" + value + "'");
                (key == "start" ? stay.start_ms : stay.end_ms) = *date_midnight + *clock;
                stay_has[key == "start" ? 2 : 3] = true;
            } else throw InvalidScenario("line " + std::to_string(row) + ": unknown stay key '" + key + "'");
        } else {
            if (key == "mode") {
                const std::optional<Mode> m = parse_mode(value);
                if (!m) throw InvalidScenario("line " + std::to_string(row) + ": unknown mode '" + value + "'");
                trip.mode = *m;
            } else if (key == "via") {
                trip.vias.push_back(detail::parse_latlon_pair(value, row));
            } else throw InvalidScenario("line " + std::to_string(row) + ": unknown trip key '" + key + "'");
        }
    }
    close_section();

    if (sc.name.empty()) throw InvalidScenario("scenario has no name");
    if (sc.date.empty()) throw InvalidScenario("scenario has no date");
    if (sc.stays.empty()) throw InvalidScenario("scenario has no stays");
    if (sc.stays.size() != sc.trips.size() + 1)
        throw InvalidScenario("scenario must alternate stay/trip and end with a stay");
    for (std::size_t i = 0; i < sc.stays.size(); ++i) {
        const ScenarioStay& s = sc.stays[i];
        if (!valid_lat(s.lat) || !valid_lon(s.lon)) throw InvalidScenario("stay coordinate out of range");
        if (s.end_ms <= s.start_ms) throw InvalidScenario("stay " + std::to_string(i + 1) + ": end not after start");
        if (i > 0 && sc.stays[i].start_ms <= sc.stays[i - 1].end_ms)
            throw InvalidScenario("stay " + std::to_string(i + 1) + ": leaves no time for the trip before it");
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(read_lines(path)); }

inline std::string write_scenario(const Scenario& sc) {
    std::string out;
    out += "name = " + sc.name + "\n";
    out += "respondent = " + sc.respondent_id + "\n";
    out += "date = " + sc.date + "\n";
    const std::optional<std::int64_t> midnight = parse_civil_date_ms(sc.date);
    char buf[96];
    for (std::size_t i = 0; i < sc.stays.size(); ++i) {
        const ScenarioStay& s = sc.stays[i];
        out += "\n[stay]\n";
        if (!s.label.empty()) out += "label = " + s.label + "\n";
        if (!s.address.empty()) out += "address = " + s.address + "\n";
        std::snprintf(buf, sizeof buf, "lat = %.7f\nlon = %.7f\n", s.lat, s.lon);
        out += buf;
        out += "start = " + format_clock_hhmmss(s.start_ms - *midnight) + "\n";
        out += "end = " + format_clock_hhmmss(s.end_ms - *midnight) + "\n";
        if (i < sc.trips.size()) {
            const ScenarioTrip& t = sc.trips[i];
            out += "\n[trip]\n";
            out += std::string("mode = ") + mode_name(t.mode) + "\n";
            for (const LatLon& v : t.vias) {
                std::snprintf(buf, sizeof buf, "via = %.7f,%.7f\n", v.lat, v.lon);
                out += buf;
            }
        }
    }
    return out;
}

/// The bundled example day: a walk from home to a school along a detour
/// route, a direct walk back, then a car commute to work.
inline Scenario worked_example_scenario() {
    const LatLon home{52.09, 5.12};
    const LatLon school = offset_m(home, 210.0, 0.0);
    // via point chosen so the outbound legs measure 220 m + 210 m while
    // the straight-line separation stays 210 m
    const double via_east = 48400.0 / 420.0;
    const LatLon via = offset_m(home, via_east, std::sqrt(48400.0 - via_east * via_east));
    const LatLon work = offset_m(home, 4000.0, -3323.0);

    const std::int64_t midnight = *parse_civil_date_ms("2024-05-14");
    const auto clock = [&](int h, int m, int s) {
        return midnight + h * kMsPerHour + m * kMsPerMinute + s * kMsPerSecond;
    };

    Scenario sc;
    sc.name = "worked_example";
    sc.respondent_id = "r1";
    sc.date = "2024-05-14";
    sc.stays.push_back({"Home", "4 Church Ln.", home.lat, home.lon, clock(8, 30, 0), clock(8, 35, 50)});
    sc.stays.push_back(
        {"Son's school", "203 Main St.", school.lat, school.lon, clock(8, 46, 30), clock(8, 51, 45)});
    sc.stays.push_back({"Home", "4 Church Ln.", home.lat, home.lon, clock(8, 56, 0), clock(9, 15, 0)});
    sc.stays.push_back({"Work", "1 Factory Rd.", work.lat, work.lon, clock(9, 21, 40), clock(17, 0, 0)});
    sc.trips.push_back({Mode::Walk, {via}});
    sc.trips.push_back({Mode::Walk, {}});
    sc.trips.push_back({Mode::Car, {}});
    return sc;
}

// ---------------------------------------------------------------------------
// Ground truth.

struct TruthStay {
    std::string label;
    std::string address;
    LatLon location;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
};

struct TruthTrip {
    Mode mode = Mode::Walk;
    std::vector<LatLon> polyline;  // stay, vias, stay
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    double length_m = 0.0;  // track length of the polyline
};

struct TruthEpisode {
    std::string respondent_id;
    std::string date;
    std::vector<TruthStay> stays;
    std::vector<TruthTrip> trips;
};

/// Expands a scenario into ground truth. Deterministic; the seed is
/// accepted for interface symmetry with the observation models but the
/// expansion itself draws nothing.
inline TruthEpisode generate_truth(const Scenario& sc, std::uint64_t /*seed*/ = 0) {
    TruthEpisode ep;
    ep.respondent_id = sc.respondent_id;
    ep.date = sc.date;
    for (const ScenarioStay& s : sc.stays)
        ep.stays.push_back({s.label, s.address, {s.lat, s.lon}, s.start_ms, s.end_ms});
    for (std::size_t i = 0; i < sc.trips.size(); ++i) {
        TruthTrip t;
        t.mode = sc.trips[i].mode;
        t.polyline.push_back(ep.stays[i].location);
        for (const LatLon& v : sc.trips[i].vias) t.polyline.push_back(v);
        t.polyline.push_back(ep.stays[i + 1].location);
        t.start_ms = ep.stays[i].end_ms;
        t.end_ms = ep.stays[i + 1].start_ms;
        t.length_m = track_length_m(std::span<const LatLon>(t.polyline));
        ep.trips.push_back(std::move(t));
    }
    return ep;
}

namespace detail {

/// Position along the truth timeline at an arbitrary instant. Trips are
/// traversed at constant speed along their polyline.
class TruthTimeline {
public:
    explicit TruthTimeline(const TruthEpisode& ep) : ep_(ep) {
        leg_cum_.resize(ep.trips.size());
        for (std::size_t i = 0; i < ep.trips.size(); ++i) {
            const std::vector<LatLon>& poly = ep.trips[i].polyline;
            std::vector<double>& cum = leg_cum_[i];
            cum.push_back(0.0);
            for (std::size_t k = 1; k < poly.size(); ++k)
                cum.push_back(cum.back() + haversine_m(poly[k - 1], poly[k]));
        }
    }

    LatLon at(std::int64_t t_ms) const {
        for (std::size_t i = 0; i < ep_.stays.size(); ++i) {
            const TruthStay& s = ep_.stays[i];
            if (t_ms >= s.start_ms && t_ms <= s.end_ms) return s.location;
            if (i < ep_.trips.size() && t_ms > s.end_ms && t_ms < ep_.stays[i + 1].start_ms)
                return along_trip(i, t_ms);
        }
        return t_ms < ep_.stays.front().start_ms ? ep_.stays.front().location : ep_.stays.back().location;
    }

private:
    LatLon along_trip(std::size_t i, std::int64_t t_ms) const {
        const TruthTrip& trip = ep_.trips[i];
        const std::vector<double>& cum = leg_cum_[i];
        const double total = cum.back();
        if (total <= 0.0) return trip.polyline.front();
        const double frac = static_cast<double>(t_ms - trip.start_ms) /
                            static_cast<double>(trip.end_ms - trip.start_ms);
        const double arc = frac * total;
        std::size_t leg = 1;
        while (leg + 1 < cum.size() && cum[leg] < arc) ++leg;
        const double leg_len = cum[leg] - cum[leg - 1];
        const double f = leg_len <= 0.0 ? 0.0 : (arc - cum[leg - 1]) / leg_len;
        const LatLon& a = trip.polyline[leg - 1];
        const LatLon& b = trip.polyline[leg];
        return {a.lat + (b.lat - a.lat) * f, a.lon + (b.lon - a.lon) * f};
    }

    const TruthEpisode& ep_;
    std::vector<std::vector<double>> leg_cum_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Observation models.

struct SensorModel {
    double sampling_interval_s = 10.0;
    double gps_noise_sigma_m = 5.0;   // isotropic, applied in the local tangent plane
    double dropout = 0.0;             // probability a fix is lost, in [0,1)
};

/// Samples the truth timeline at the model's interval. Each retained
/// fix is displaced by planar Gaussian noise; dropped fixes consume no
/// noise draws, so the fix stream is a pure function of (truth, model,
/// seed).
inline Trace sensor_observe(const TruthEpisode& ep, const SensorModel& m, std::uint64_t seed) {
    if (m.sampling_interval_s <= 0.0) throw ConfigError("sensor_observe: sampling interval must be positive");
    if (m.dropout < 0.0 || m.dropout >= 1.0) throw ConfigError("sensor_observe: dropout must be in [0,1)");
    if (m.gps_noise_sigma_m < 0.0) throw ConfigError("sensor_observe: noise sigma must be non-negative");

    const detail::TruthTimeline timeline(ep);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Trace trace;
    trace.respondent_id = ep.respondent_id;
    const std::int64_t step = static_cast<std::int64_t>(m.sampling_interval_s * 1000.0);
    for (std::int64_t t = ep.stays.front().start_ms; t <= ep.stays.back().end_ms; t += step) {
        if (m.dropout > 0.0 && unit(rng) < m.dropout) continue;
        LatLon pos = timeline.at(t);
        if (m.gps_noise_sigma_m > 0.0)
            pos = offset_m(pos, gauss(rng) * m.gps_noise_sigma_m, gauss(rng) * m.gps_noise_sigma_m);
        trace.points.push_back({pos.lat, pos.lon, t});
    }
    return trace;
}

struct DiaryModel {
    enum class DistanceReport { StraightLine, TruthRounded };

    int time_rounding_min = 5;
    double omission_p0 = 0.5;        // omission probability at zero length
    double omission_lambda_m = 500;  // decay of omission with trip length
    DistanceReport distance_report = DistanceReport::StraightLine;

    double omission_probability(double length_m) const {
        return omission_p0 * std::exp(-length_m / omission_lambda_m);
    }
};

/// Simulates respondent-reported diary rows: short trips are forgotten
/// with probability p0*exp(-length/lambda); reported times snap outward
/// to the rounding grid (start down, end up); distance is the straight
/// line between the endpoints or the rounded true length.
inline std::vector<DiaryEntry> diary_observe(const TruthEpisode& ep, const DiaryModel& m,
                                             std::uint64_t seed) {
    if (m.time_rounding_min <= 0) throw ConfigError("diary_observe: rounding must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::int64_t grid = static_cast<std::int64_t>(m.time_rounding_min) * kMsPerMinute;

    std::vector<DiaryEntry> out;
    for (std::size_t i = 0; i < ep.trips.size(); ++i) {
        const TruthTrip& t = ep.trips[i];
        const double u = unit(rng);
        if (u < m.omission_probability(t.length_m)) continue;

        DiaryEntry e;
        e.respondent_id = ep.respondent_id;
        const std::int64_t start = t.start_ms / grid * grid;
        const std::int64_t end = (t.end_ms + grid - 1) / grid * grid;
        std::int64_t day_start = start / kMsPerDay * kMsPerDay;
        e.day = format_civil_date(start);
        e.start_ms = start - day_start;
        e.end_ms = end - day_start;
        e.label = ep.stays[i + 1].label;
        e.address = ep.stays[i + 1].address;
        e.transport = t.mode;
        e.kind = DistanceKind::RespondentReported;
        if (m.distance_report == DiaryModel::DistanceReport::StraightLine)
            e.distance_m = haversine_m(ep.stays[i].location, ep.stays[i + 1].location);
        else
            e.distance_m = static_cast<double>(std::llround(t.length_m));
        out.push_back(std::move(e));
    }
    return out;
}

/// Gazetteer covering the scenario's own places, for running the
/// pipeline against simulated data.
inline Gazetteer gazetteer_from_truth(const TruthEpisode& ep, double match_radius_m = 100.0) {
    Gazetteer g;
    g.match_radius_m = match_radius_m;
    for (const TruthStay& s : ep.stays) {
        if (s.address.empty()) continue;
        bool seen = false;
        for (const GazetteerEntry& e : g.entries)
            if (e.address == s.address && e.lat == s.location.lat && e.lon == s.location.lon) seen = true;
        if (!seen) g.entries.push_back({s.location.lat, s.location.lon, s.address, s.label});
    }
    return g;
}

// ---------------------------------------------------------------------------
// Recovery metrics: how well a derived diary reproduces the truth.

struct RecoveryMetrics {
    std::size_t truth_trips = 0;
    std::size_t derived_trips = 0;
    std::size_t matched = 0;
    double recall = 0.0;
    double precision = 0.0;
    double start_mae_s = 0.0;
    double end_mae_s = 0.0;
    double distance_relative_error = 0.0;
    bool truth_empty = false;
    bool derived_empty = false;
};

/// Greedy one-to-one matching by time overlap. A candidate pair must
/// overlap at least half of the longer of the two trips. Derived diary
/// times are converted back to UTC with the timezone offset the
/// pipeline applied.
inline RecoveryMetrics evaluate_recovery(const TruthEpisode& ep, std::span<const DiaryEntry> derived,
                                         int tz_offset_min = 0) {
    RecoveryMetrics m;
    m.truth_trips = ep.trips.size();
    m.derived_trips = derived.size();
    m.truth_empty = ep.trips.empty();
    m.derived_empty = derived.empty();
    if (m.truth_empty || m.derived_empty) return m;

    struct Interval {
        std::int64_t start, end;
        double distance;
    };
    std::vector<Interval> der;
    for (const DiaryEntry& e : derived) {
        const std::optional<std::int64_t> midnight = parse_civil_date_ms(e.day);
        if (!midnight) throw Error("evaluate_recovery: derived day '" + e.day + "' is not a calendar date");
        const std::int64_t offset = static_cast<std::int64_t>(tz_offset_min) * kMsPerMinute;
        der.push_back({*midnight + e.start_ms - offset, *midnight + e.end_ms - offset, e.distance_m});
    }

    struct Candidate {
        std::int64_t overlap;
        std::size_t ti, di;
    };
    std::vector<Candidate> cands;
    for (std::size_t ti = 0; ti < ep.trips.size(); ++ti) {
        for (std::size_t di = 0; di < der.size(); ++di) {
            const std::int64_t ov = std::min(ep.trips[ti].end_ms, der[di].end) -
                                    std::max(ep.trips[ti].start_ms, der[di].start);
            const std::int64_t longer =
                std::max(ep.trips[ti].end_ms - ep.trips[ti].start_ms, der[di].end - der[di].start);
            if (ov <= 0 || longer <= 0) continue;
            if (2 * ov < longer) continue;
            cands.push_back({ov, ti, di});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(b.overlap, a.ti, a.di) < std::tie(a.overlap, b.ti, b.di);
    });
    std::vector<bool> used_t(ep.trips.size(), false), used_d(der.size(), false);
    double start_err = 0.0, end_err = 0.0, dist_err = 0.0;
    std::size_t dist_n = 0;
    for (const Candidate& c : cands) {
        if (used_t[c.ti] || used_d[c.di]) continue;
        used_t[c.ti] = used_d[c.di] = true;
        ++m.matched;
        start_err += std::abs(static_cast<double>(ep.trips[c.ti].start_ms - der[c.di].start)) / 1000.0;
        end_err += std::abs(static_cast<double>(ep.trips[c.ti].end_ms - der[c.di].end)) / 1000.0;
        if (ep.trips[c.ti].length_m > 0.0) {
            dist_err += std::abs(der[c.di].distance - ep.trips[c.ti].length_m) / ep.trips[c.ti].length_m;
            ++dist_n;
        }
    }
    m.recall = static_cast<double>(m.matched) / static_cast<double>(m.truth_trips);
    m.precision = static_cast<double>(m.matched) / static_cast<double>(m.derived_trips);
    if (m.matched > 0) {
        m.start_mae_s = start_err / static_cast<double>(m.matched);
        m.end_mae_s = end_err / static_cast<double>(m.matched);
        if (dist_n > 0) m.distance_relative_error = dist_err / static_cast<double>(dist_n);
    }
    return m;
}

inline std::string format_recovery(const RecoveryMetrics& m) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "trips_truth %zu\ntrips_derived %zu\nmatched %zu\nrecall %.4f\nprecision %.4f\n"
                  "start_mae_s %.3f\nend_mae_s %.3f\ndistance_rel_err %.4f\n",
                  m.truth_trips, m.derived_trips, m.matched, m.recall, m.precision, m.start_mae_s,
                  m.end_mae_s, m.distance_relative_error);
    return buf;
}

}  // namespace geodiary
