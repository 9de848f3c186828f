#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "geodiary/csv.hpp"
#include "geodiary/errors.hpp"
#include "geodiary/estimate.hpp"
#include "geodiary/harmonize.hpp"
#include "geodiary/mode.hpp"
#include "geodiary/simulate.hpp"
#include "geodiary/stops.hpp"

namespace geodiary {

/// Run configuration. Plain-text `key = value` files with dotted
/// sections, so runs stay archivable and diffable; `--set key=value`
/// overrides win over file values, which win over defaults.
struct RunConfig {
    StopParams stop;                     // stop.radius_m, stop.min_duration_s
    double max_gap_s = 300.0;            // gaps.max_gap_s
    ModeThresholds thresholds;           // modes.walk_max_mps, modes.bike_max_mps, modes.car_max_mps
    std::string gazetteer_path;          // geocode.gazetteer
    double match_radius_m = 100.0;       // geocode.match_radius_m
    std::string router_url;              // router.url (empty: great-circle)
    bool router_fallback = true;         // router.fallback
    int tz_offset_min = 0;               // time.tz_offset_min
    bool keep_app_labels = false;        // harmonize.keep_app_labels
    std::string weighting = "auto";      // estimate.weighting: auto|inverse_variance|by_n
    SensorModel sensor;                  // sim.sampling_interval_s, sim.gps_noise_sigma_m, sim.dropout
    DiaryModel diary_model;              // sim.time_rounding_min, sim.omission_p0,
                                         // sim.omission_lambda_m, sim.distance_report
    std::uint64_t seed = 1;              // seed
};

namespace detail {

inline double config_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
    }
}

inline bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config: bad boolean for " + key + ": '" + value + "'");
}

}  // namespace detail

inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    using detail::config_bool;
    using detail::config_double;
    if (key == "stop.radius_m") cfg.stop.radius_m = config_double(key, value);
    else if (key == "stop.min_duration_s") cfg.stop.min_duration_s = config_double(key, value);
    else if (key == "gaps.max_gap_s") cfg.max_gap_s = config_double(key, value);
    else if (key == "modes.walk_max_mps") cfg.thresholds.upper_mps[0] = config_double(key, value);
    else if (key == "modes.bike_max_mps") cfg.thresholds.upper_mps[1] = config_double(key, value);
    else if (key == "modes.car_max_mps") cfg.thresholds.upper_mps[2] = config_double(key, value);
    else if (key == "geocode.gazetteer") cfg.gazetteer_path = value;
    else if (key == "geocode.match_radius_m") cfg.match_radius_m = config_double(key, value);
    else if (key == "router.url") cfg.router_url = value;
    else if (key == "router.fallback") cfg.router_fallback = config_bool(key, value);
    else if (key == "time.tz_offset_min") cfg.tz_offset_min = static_cast<int>(config_double(key, value));
    else if (key == "harmonize.keep_app_labels") cfg.keep_app_labels = config_bool(key, value);
    else if (key == "estimate.weighting") {
        if (value != "auto" && value != "inverse_variance" && value != "by_n")
            throw ConfigError("config: estimate.weighting must be auto, inverse_variance or by_n");
        cfg.weighting = value;
    } else if (key == "sim.sampling_interval_s") cfg.sensor.sampling_interval_s = config_double(key, value);
    else if (key == "sim.gps_noise_sigma_m") cfg.sensor.gps_noise_sigma_m = config_double(key, value);
    else if (key == "sim.dropout") cfg.sensor.dropout = config_double(key, value);
    else if (key == "sim.time_rounding_min") cfg.diary_model.time_rounding_min = static_cast<int>(config_double(key, value));
    else if (key == "sim.omission_p0") cfg.diary_model.omission_p0 = config_double(key, value);
    else if (key == "sim.omission_lambda_m") cfg.diary_model.omission_lambda_m = config_double(key, value);
    else if (key == "sim.distance_report") {
        if (value == "straight_line") cfg.diary_model.distance_report = DiaryModel::DistanceReport::StraightLine;
        else if (value == "truth_rounded") cfg.diary_model.distance_report = DiaryModel::DistanceReport::TruthRounded;
        else throw ConfigError("config: sim.distance_report must be straight_line or truth_rounded");
    } else if (key == "seed") {
        try {
            cfg.seed = std::stoull(value);
        } catch (const std::exception&) {
            throw ConfigError("config: bad seed '" + value + "'");
        }
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::vector<std::string> lines;
    try {
        lines = read_lines(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config " + path + " line " + std::to_string(i + 1) + ": expected key = value");
        auto trim = [](std::string s) {
            const std::size_t x = s.find_first_not_of(" \t");
            const std::size_t y = s.find_last_not_of(" \t");
            return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
        };
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

/// Applies one `--set key=value` override.
inline void apply_config_override(RunConfig& cfg, const std::string& setting) {
    const std::size_t eq = setting.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + setting + "'");
    apply_config_entry(cfg, setting.substr(0, eq), setting.substr(eq + 1));
}

/// Range checks plus existence of referenced files.
inline void validate_config(const RunConfig& cfg) {
    if (cfg.stop.radius_m <= 0.0 || cfg.stop.min_duration_s <= 0.0)
        throw ConfigError("config: stop parameters must be positive");
    if (cfg.max_gap_s <= 0.0) throw ConfigError("config: gaps.max_gap_s must be positive");
    cfg.thresholds.validate();
    if (cfg.match_radius_m <= 0.0) throw ConfigError("config: geocode.match_radius_m must be positive");
    if (cfg.sensor.sampling_interval_s <= 0.0)
        throw ConfigError("config: sim.sampling_interval_s must be positive");
    if (cfg.sensor.gps_noise_sigma_m < 0.0) throw ConfigError("config: sim.gps_noise_sigma_m must be >= 0");
    if (cfg.sensor.dropout < 0.0 || cfg.sensor.dropout >= 1.0)
        throw ConfigError("config: sim.dropout must be in [0,1)");
    if (cfg.diary_model.time_rounding_min <= 0)
        throw ConfigError("config: sim.time_rounding_min must be positive");
    if (cfg.diary_model.omission_p0 < 0.0 || cfg.diary_model.omission_p0 > 1.0)
        throw ConfigError("config: sim.omission_p0 must be in [0,1]");
    if (cfg.diary_model.omission_lambda_m <= 0.0)
        throw ConfigError("config: sim.omission_lambda_m must be positive");
    if (!cfg.gazetteer_path.empty() && !std::filesystem::exists(cfg.gazetteer_path))
        throw ConfigError("config: gazetteer file not found: " + cfg.gazetteer_path);
}

inline Weighting resolve_weighting(const RunConfig& cfg, std::span<const SourceEstimate> estimates) {
    Weighting w;
    if (cfg.weighting == "by_n") {
        w.kind = Weighting::Kind::ByN;
    } else if (cfg.weighting == "inverse_variance") {
        w.kind = Weighting::Kind::InverseVariance;
    } else {
        // auto: inverse-variance when every estimate has a usable
        // variance, otherwise fall back to sample-size weights
        w.kind = Weighting::Kind::InverseVariance;
        for (const SourceEstimate& e : estimates)
            if (!e.variance || *e.variance <= 0.0) w.kind = Weighting::Kind::ByN;
    }
    return w;
}

}  // namespace geodiary
