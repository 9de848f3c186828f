#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geodiary/diary.hpp"
#include "geodiary/errors.hpp"
#include "geodiary/harmonize.hpp"

namespace geodiary {

/// A statistic computed on one source's own data structure.
struct SourceEstimate {
    std::string statistic;
    SourceTag source = SourceTag::Diary;
    double value = 0.0;
    std::size_t n = 0;
    std::optional<double> variance;  // variance of the estimate, not of the data
};

inline std::string mean_distance_statistic_name(std::optional<Mode> filter) {
    if (!filter) return "mean_trip_distance_m";
    std::string m = mode_name(*filter);
    std::transform(m.begin(), m.end(), m.begin(), [](unsigned char c) { return std::tolower(c); });
    return "mean_" + m + "_trip_distance_m";
}

/// Mean reported distance over trips matching the mode filter (nullopt
/// = all trips). Variance of the mean (sample variance / n) is attached
/// when at least two trips contribute.
inline SourceEstimate estimate_mean_distance(std::span<const DiaryEntry> entries,
                                             std::optional<Mode> filter, SourceTag source) {
    SourceEstimate est;
    est.statistic = mean_distance_statistic_name(filter);
    est.source = source;
    double sum = 0.0;
    std::vector<double> values;
    for (const DiaryEntry& e : entries) {
        if (filter && e.transport != *filter) continue;
        sum += e.distance_m;
        values.push_back(e.distance_m);
    }
    if (values.empty()) throw NoMatchingTrips("no trips match filter for " + est.statistic);
    est.n = values.size();
    est.value = sum / static_cast<double>(est.n);
    if (est.n >= 2) {
        double ss = 0.0;
        for (const double v : values) ss += (v - est.value) * (v - est.value);
        const double sample_var = ss / static_cast<double>(est.n - 1);
        est.variance = sample_var / static_cast<double>(est.n);
    }
    return est;
}

/// Track-measured over route-inferred distance, pooled as a
/// ratio-of-sums. Per-pair ratios are kept for dispersion diagnostics;
/// the pooled ratio is what gets applied.
struct CalibrationFactor {
    double ratio = 1.0;
    std::size_t n_pairs = 0;
    std::vector<double> per_pair;
};

inline CalibrationFactor calibration_ratio(std::span<const std::pair<double, double>> pairs) {
    if (pairs.empty()) throw EmptyPairs("calibration_ratio: no pairs");
    CalibrationFactor f;
    double actual = 0.0, inferred = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!(pairs[i].second > 0.0))
            throw ZeroInferredDistance("calibration_ratio: pair " + std::to_string(i + 1) +
                                       " has non-positive inferred distance");
        actual += pairs[i].first;
        inferred += pairs[i].second;
        f.per_pair.push_back(pairs[i].first / pairs[i].second);
    }
    f.ratio = actual / inferred;
    f.n_pairs = pairs.size();
    return f;
}

enum class IntegrationMethod { MacroWeighted, CalibratedDiary };

inline const char* integration_method_name(IntegrationMethod m) {
    return m == IntegrationMethod::MacroWeighted ? "MacroWeighted" : "CalibratedDiary";
}

struct WeightedContribution {
    SourceEstimate estimate;
    double weight = 0.0;
};

struct IntegratedEstimate {
    std::string statistic;
    double value = 0.0;
    IntegrationMethod method = IntegrationMethod::MacroWeighted;
    std::vector<WeightedContribution> contributions;
};

/// Corrects a diary-side distance estimate by the calibration ratio.
/// The variance scales by ratio squared (the ratio is treated as a
/// constant).
inline IntegratedEstimate apply_calibration(const SourceEstimate& diary_est, const CalibrationFactor& f) {
    if (diary_est.source != SourceTag::Diary)
        throw SourceMismatch("apply_calibration: estimate must come from the Diary source");
    IntegratedEstimate out;
    out.statistic = diary_est.statistic;
    out.method = IntegrationMethod::CalibratedDiary;
    out.value = diary_est.value * f.ratio;
    SourceEstimate adjusted = diary_est;
    adjusted.value = out.value;
    if (adjusted.variance) adjusted.variance = *adjusted.variance * f.ratio * f.ratio;
    out.contributions.push_back({std::move(adjusted), 1.0});
    return out;
}

struct Weighting {
    enum class Kind { InverseVariance, ByN, Explicit };
    Kind kind = Kind::InverseVariance;
    std::vector<double> weights;  // used by Explicit only
};

/// Weighted combination of estimates of one statistic. Weights are
/// normalized to sum to 1 and recorded with the result.
inline IntegratedEstimate macro_integrate(std::span<const SourceEstimate> estimates,
                                          const Weighting& weighting) {
    if (estimates.empty()) throw MixedStatistics("macro_integrate: no estimates");
    for (const SourceEstimate& e : estimates)
        if (e.statistic != estimates.front().statistic)
            throw MixedStatistics("macro_integrate: mixed statistics '" + estimates.front().statistic +
                                  "' vs '" + e.statistic + "'");

    std::vector<double> w(estimates.size(), 0.0);
    switch (weighting.kind) {
        case Weighting::Kind::InverseVariance:
            for (std::size_t i = 0; i < estimates.size(); ++i) {
                if (!estimates[i].variance || *estimates[i].variance <= 0.0)
                    throw MissingVariance("macro_integrate: estimate " + std::to_string(i + 1) +
                                          " has no usable variance");
                w[i] = 1.0 / *estimates[i].variance;
            }
            break;
        case Weighting::Kind::ByN:
            for (std::size_t i = 0; i < estimates.size(); ++i) w[i] = static_cast<double>(estimates[i].n);
            break;
        case Weighting::Kind::Explicit:
            if (weighting.weights.size() != estimates.size())
                throw ConfigError("macro_integrate: explicit weight count mismatch");
            w = weighting.weights;
            for (const double x : w)
                if (x < 0.0) throw ConfigError("macro_integrate: negative explicit weight");
            break;
    }
    double total = 0.0;
    for (const double x : w) total += x;
    if (total <= 0.0) throw ConfigError("macro_integrate: weights sum to zero");

    IntegratedEstimate out;
    out.statistic = estimates.front().statistic;
    out.method = IntegrationMethod::MacroWeighted;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const double wi = w[i] / total;
        out.value += wi * estimates[i].value;
        out.contributions.push_back({estimates[i], wi});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Estimates file: `statistic,source_or_method,value,n,variance,weights`,
// one row per source estimate and per integrated estimate. Weights are
// semicolon-joined in contribution order.

inline constexpr const char* kEstimatesHeader = "statistic,source_or_method,value,n,variance,weights";

inline void append_estimate_row(std::string& out, const SourceEstimate& e) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%zu,", e.statistic.c_str(), source_name(e.source), e.value,
                  e.n);
    out += buf;
    if (e.variance) {
        std::snprintf(buf, sizeof buf, "%.6f", *e.variance);
        out += buf;
    }
    out += ",\n";
}

inline void append_integrated_row(std::string& out, const IntegratedEstimate& e) {
    char buf[128];
    std::size_t n = 0;
    for (const WeightedContribution& c : e.contributions) n += c.estimate.n;
    std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%zu,,", e.statistic.c_str(),
                  integration_method_name(e.method), e.value, n);
    out += buf;
    for (std::size_t i = 0; i < e.contributions.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.6f", i ? ";" : "", e.contributions[i].weight);
        out += buf;
    }
    out += '\n';
}

inline void append_ratio_row(std::string& out, const CalibrationFactor& f) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "distance_calibration_ratio,PairedTrips,%.6f,%zu,,\n", f.ratio,
                  f.n_pairs);
    out += buf;
}

}  // namespace geodiary
