#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geodiary/errors.hpp"

namespace geodiary {

enum class Mode { Walk, Bike, Car, Train, Unknown };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Walk: return "Walk";
        case Mode::Bike: return "Bike";
        case Mode::Car: return "Car";
        case Mode::Train: return "Train";
        case Mode::Unknown: return "Unknown";
    }
    return "Unknown";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "Walk") return Mode::Walk;
    if (s == "Bike") return Mode::Bike;
    if (s == "Car") return Mode::Car;
    if (s == "Train") return Mode::Train;
    if (s == "Unknown") return Mode::Unknown;
    return std::nullopt;
}

/// Median-speed breakpoints for mode inference: speeds below
/// `upper_mps[i]` map to `labels[i]`, anything above the last
/// breakpoint maps to `top`. Breakpoints must increase strictly.
struct ModeThresholds {
    std::vector<double> upper_mps{2.0, 6.0, 35.0};
    std::vector<Mode> labels{Mode::Walk, Mode::Bike, Mode::Car};
    Mode top = Mode::Train;

    Mode classify(double speed_mps) const {
        for (std::size_t i = 0; i < upper_mps.size(); ++i)
            if (speed_mps < upper_mps[i]) return labels[i];
        return top;
    }

    void validate() const {
        if (labels.size() != upper_mps.size())
            throw ConfigError("mode thresholds: breakpoint/label count mismatch");
        for (std::size_t i = 1; i < upper_mps.size(); ++i)
            if (upper_mps[i] <= upper_mps[i - 1])
                throw ConfigError("mode thresholds: breakpoints must increase strictly");
    }
};

}  // namespace geodiary
