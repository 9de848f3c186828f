#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "geodiary/csv.hpp"
#include "geodiary/diary.hpp"
#include "geodiary/errors.hpp"
#include "geodiary/mode.hpp"

namespace geodiary {

enum class SourceTag { Diary, App };

inline const char* source_name(SourceTag s) { return s == SourceTag::Diary ? "Diary" : "App"; }

inline std::optional<SourceTag> parse_source(std::string_view s) {
    if (s == "Diary") return SourceTag::Diary;
    if (s == "App") return SourceTag::App;
    return std::nullopt;
}

/// One row of the combined dataset, normalized to the shared
/// granularity: times in whole minutes, distance in whole meters.
struct HarmonizedRow {
    std::string respondent_id;
    std::string day;
    SourceTag source = SourceTag::Diary;
    std::string label;
    std::string address;
    int start_min = 0;
    int end_min = 0;
    Mode transport = Mode::Unknown;
    std::int64_t distance_m = 0;

    friend bool operator==(const HarmonizedRow&, const HarmonizedRow&) = default;
};

/// Per-field absence flags for one row; true means the field is absent.
/// Only label and address can be absent, the rest are mandatory.
struct FieldFlags {
    bool label = false;
    bool address = false;

    friend bool operator==(const FieldFlags&, const FieldFlags&) = default;
};

struct HarmonizedDataset {
    std::vector<HarmonizedRow> rows;
    std::vector<FieldFlags> missing_mask;  // parallel to rows

    friend bool operator==(const HarmonizedDataset&, const HarmonizedDataset&) = default;
};

struct HarmonizeOptions {
    // Table-style combined output drops app-side labels; set to keep
    // gazetteer labels on App rows.
    bool keep_app_labels = false;
};

namespace detail {

inline void check_entry(const DiaryEntry& e, std::size_t index, const char* source) {
    if (e.respondent_id.empty())
        throw SchemaViolation(std::string(source) + ": empty respondent_id", index, "respondent_id");
    if (e.day.empty()) throw SchemaViolation(std::string(source) + ": empty day", index, "day");
    if (e.end_ms <= e.start_ms)
        throw SchemaViolation(std::string(source) + ": trip_end not after trip_start", index, "trip_end");
    if (e.distance_m < 0.0)
        throw SchemaViolation(std::string(source) + ": negative distance", index, "distance_m");
}

inline HarmonizedRow normalize(const DiaryEntry& e, SourceTag tag, bool keep_app_labels) {
    HarmonizedRow r;
    r.respondent_id = e.respondent_id;
    r.day = e.day;
    r.source = tag;
    r.label = tag == SourceTag::App && !keep_app_labels ? std::string() : e.label;
    r.address = e.address;
    r.start_min = static_cast<int>(e.start_ms / kMsPerMinute);
    r.end_min = static_cast<int>(e.end_ms / kMsPerMinute);
    r.transport = e.transport;
    r.distance_m = std::llround(e.distance_m);
    return r;
}

}  // namespace detail

/// Casts both sources into the combined schema: tags rows, normalizes
/// formatting, computes the missing-data mask, and sorts by
/// (respondent, day, trip start). Row count is conserved.
inline HarmonizedDataset harmonize(std::span<const DiaryEntry> diary_rows,
                                   std::span<const DiaryEntry> app_rows,
                                   const HarmonizeOptions& opts = {}) {
    HarmonizedDataset ds;
    ds.rows.reserve(diary_rows.size() + app_rows.size());
    for (std::size_t i = 0; i < diary_rows.size(); ++i) {
        detail::check_entry(diary_rows[i], i + 1, "diary");
        ds.rows.push_back(detail::normalize(diary_rows[i], SourceTag::Diary, opts.keep_app_labels));
    }
    for (std::size_t i = 0; i < app_rows.size(); ++i) {
        detail::check_entry(app_rows[i], i + 1, "app");
        ds.rows.push_back(detail::normalize(app_rows[i], SourceTag::App, opts.keep_app_labels));
    }
    std::sort(ds.rows.begin(), ds.rows.end(), [](const HarmonizedRow& a, const HarmonizedRow& b) {
        return std::tie(a.respondent_id, a.day, a.start_min, a.source, a.end_min, a.address, a.label) <
               std::tie(b.respondent_id, b.day, b.start_min, b.source, b.end_min, b.address, b.label);
    });
    ds.missing_mask.reserve(ds.rows.size());
    for (const HarmonizedRow& r : ds.rows)
        ds.missing_mask.push_back({r.label.empty(), r.address.empty()});
    return ds;
}

/// Recovers the two per-source row sets (up to the normalization that
/// harmonize applies). Inverse of harmonize for already-normalized data.
inline std::pair<std::vector<DiaryEntry>, std::vector<DiaryEntry>> split_by_source(
    const HarmonizedDataset& ds) {
    std::pair<std::vector<DiaryEntry>, std::vector<DiaryEntry>> out;
    for (const HarmonizedRow& r : ds.rows) {
        DiaryEntry e;
        e.respondent_id = r.respondent_id;
        e.day = r.day;
        e.label = r.label;
        e.address = r.address;
        e.start_ms = static_cast<std::int64_t>(r.start_min) * kMsPerMinute;
        e.end_ms = static_cast<std::int64_t>(r.end_min) * kMsPerMinute;
        e.transport = r.transport;
        e.distance_m = static_cast<double>(r.distance_m);
        if (r.source == SourceTag::Diary) {
            e.kind = DistanceKind::RespondentReported;
            out.first.push_back(std::move(e));
        } else {
            e.kind = DistanceKind::TrackMeasured;
            out.second.push_back(std::move(e));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mode-effect diagnostic: per-variable summaries for each source plus
// App-minus-Diary differences.

struct SourceSummary {
    bool empty = true;
    double trip_count = 0.0;
    double trips_per_respondent_day = 0.0;
    double mean_duration_min = 0.0;
    double mean_distance_m = 0.0;
    std::array<double, 5> mode_share{};  // indexed by Mode
};

struct ModeEffectReport {
    SourceSummary diary;
    SourceSummary app;
    // valid only when both sources are nonempty
    std::vector<std::string> variables;
    std::vector<double> diary_values;
    std::vector<double> app_values;
    std::vector<double> differences;      // App - Diary
    std::vector<double> relative_differences;  // difference / mean of the two
};

namespace detail {

inline SourceSummary summarize(const HarmonizedDataset& ds, SourceTag tag) {
    SourceSummary s;
    std::set<std::pair<std::string, std::string>> respondent_days;
    double dur = 0.0, dist = 0.0;
    std::array<double, 5> counts{};
    std::size_t n = 0;
    for (const HarmonizedRow& r : ds.rows) {
        if (r.source != tag) continue;
        ++n;
        respondent_days.insert({r.respondent_id, r.day});
        dur += r.end_min - r.start_min;
        dist += static_cast<double>(r.distance_m);
        counts[static_cast<std::size_t>(r.transport)] += 1.0;
    }
    if (n == 0) return s;
    s.empty = false;
    s.trip_count = static_cast<double>(n);
    s.trips_per_respondent_day = static_cast<double>(n) / static_cast<double>(respondent_days.size());
    s.mean_duration_min = dur / static_cast<double>(n);
    s.mean_distance_m = dist / static_cast<double>(n);
    for (std::size_t i = 0; i < counts.size(); ++i) s.mode_share[i] = counts[i] / static_cast<double>(n);
    return s;
}

}  // namespace detail

inline ModeEffectReport mode_effect_report(const HarmonizedDataset& ds) {
    ModeEffectReport rep;
    rep.diary = detail::summarize(ds, SourceTag::Diary);
    rep.app = detail::summarize(ds, SourceTag::App);
    if (rep.diary.empty || rep.app.empty) return rep;

    const auto add = [&](const std::string& name, double d, double a) {
        rep.variables.push_back(name);
        rep.diary_values.push_back(d);
        rep.app_values.push_back(a);
        const double diff = a - d;
        rep.differences.push_back(diff);
        const double mid = (a + d) / 2.0;
        rep.relative_differences.push_back(mid == 0.0 ? 0.0 : diff / mid);
    };
    add("trip_count", rep.diary.trip_count, rep.app.trip_count);
    add("trips_per_respondent_day", rep.diary.trips_per_respondent_day, rep.app.trips_per_respondent_day);
    add("mean_duration_min", rep.diary.mean_duration_min, rep.app.mean_duration_min);
    add("mean_distance_m", rep.diary.mean_distance_m, rep.app.mean_distance_m);
    for (const Mode m : {Mode::Walk, Mode::Bike, Mode::Car, Mode::Train, Mode::Unknown})
        add(std::string("share_") + mode_name(m), rep.diary.mode_share[static_cast<std::size_t>(m)],
            rep.app.mode_share[static_cast<std::size_t>(m)]);
    return rep;
}

/// Renders the report as an aligned text table.
inline std::string format_mode_effect(const ModeEffectReport& rep) {
    std::string out;
    char line[160];
    if (rep.diary.empty || rep.app.empty) {
        std::snprintf(line, sizeof line, "mode-effect report: diary=%s app=%s\n",
                      rep.diary.empty ? "EMPTY" : "present", rep.app.empty ? "EMPTY" : "present");
        out += line;
        return out;
    }
    std::snprintf(line, sizeof line, "%-26s %14s %14s %14s %10s\n", "variable", "diary", "app", "diff",
                  "rel_diff");
    out += line;
    for (std::size_t i = 0; i < rep.variables.size(); ++i) {
        std::snprintf(line, sizeof line, "%-26s %14.4f %14.4f %14.4f %10.4f\n", rep.variables[i].c_str(),
                      rep.diary_values[i], rep.app_values[i], rep.differences[i],
                      rep.relative_differences[i]);
        out += line;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Harmonized file: combined-table column order with a leading
// respondent id; absent fields are written empty.

inline constexpr const char* kHarmonizedHeader =
    "respondent_id,day,mode,label,address,trip_start,trip_end,transport_method,distance_m";

inline std::string write_harmonized_csv(const HarmonizedDataset& ds) {
    std::string out = std::string(kHarmonizedHeader) + "\n";
    for (const HarmonizedRow& r : ds.rows) {
        out += r.respondent_id;
        out += ',';
        out += r.day;
        out += ',';
        out += source_name(r.source);
        out += ',';
        out += r.label;
        out += ',';
        out += r.address;
        out += ',';
        out += format_clock_hhmm(static_cast<std::int64_t>(r.start_min) * kMsPerMinute);
        out += ',';
        out += format_clock_hhmm(static_cast<std::int64_t>(r.end_min) * kMsPerMinute);
        out += ',';
        out += mode_name(r.transport);
        out += ',';
        out += std::to_string(r.distance_m);
        out += '\n';
    }
    return out;
}

inline HarmonizedDataset read_harmonized_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    require_header(lines, kHarmonizedHeader, path);
    HarmonizedDataset ds;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != 9) throw SchemaViolation("expected 9 fields", i + 1, "row");
        HarmonizedRow r;
        if (f[0].empty()) throw SchemaViolation("empty respondent_id", i + 1, "respondent_id");
        r.respondent_id = f[0];
        if (f[1].empty()) throw SchemaViolation("empty day", i + 1, "day");
        r.day = f[1];
        const std::optional<SourceTag> src = parse_source(f[2]);
        if (!src) throw SchemaViolation("unknown mode '" + f[2] + "'", i + 1, "mode");
        r.source = *src;
        r.label = f[3];
        r.address = f[4];
        const std::optional<std::int64_t> start = parse_clock_ms(f[5]);
        const std::optional<std::int64_t> end = parse_clock_ms(f[6]);
        if (!start) throw SchemaViolation("bad time", i + 1, "trip_start");
        if (!end) throw SchemaViolation("bad time", i + 1, "trip_end");
        r.start_min = static_cast<int>(*start / kMsPerMinute);
        r.end_min = static_cast<int>(*end / kMsPerMinute);
        const std::optional<Mode> mode = parse_mode(f[7]);
        if (!mode) throw SchemaViolation("unknown transport_method", i + 1, "transport_method");
        r.transport = *mode;
        try {
            r.distance_m = std::stoll(f[8]);
        } catch (const std::exception&) {
            throw SchemaViolation("bad distance", i + 1, "distance_m");
        }
        ds.rows.push_back(std::move(r));
    }
    for (const HarmonizedRow& r : ds.rows) ds.missing_mask.push_back({r.label.empty(), r.address.empty()});
    return ds;
}

}  // namespace geodiary
