#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geodiary/harmonize.hpp"
#include "support/run_cli.hpp"

using namespace geodiary;

namespace {

DiaryEntry entry(const std::string& day, const std::string& label, const std::string& address,
                 int sh, int sm, int eh, int em, Mode mode, double dist, DistanceKind kind) {
    DiaryEntry e;
    e.respondent_id = "r1";
    e.day = day;
    e.label = label;
    e.address = address;
    e.start_ms = (sh * 60LL + sm) * kMsPerMinute;
    e.end_ms = (eh * 60LL + em) * kMsPerMinute;
    e.transport = mode;
    e.distance_m = dist;
    e.kind = kind;
    return e;
}

// the published example: two respondent-reported rows, two app rows
std::vector<DiaryEntry> example_diary_rows() {
    return {entry("1", "Son's school", "203 Main St.", 8, 35, 8, 50, Mode::Walk, 210,
                  DistanceKind::RespondentReported),
            entry("1", "Home", "4 Church Ln.", 8, 50, 9, 0, Mode::Walk, 210,
                  DistanceKind::RespondentReported)};
}

std::vector<DiaryEntry> example_app_rows() {
    return {entry("2", "Son's school", "203 Main St.", 8, 35, 8, 43, Mode::Walk, 210,
                  DistanceKind::RouteInferred),
            entry("2", "Home", "4 Church Ln.", 8, 51, 8, 53, Mode::Walk, 210,
                  DistanceKind::RouteInferred)};
}

std::vector<DiaryEntry> random_entries(std::mt19937_64& rng, int n) {
    std::vector<DiaryEntry> out;
    std::uniform_int_distribution<int> start(0, 1300);
    std::uniform_int_distribution<int> dur(1, 120);
    std::uniform_int_distribution<int> day(1, 3);
    std::uniform_int_distribution<int> mode(0, 4);
    std::uniform_real_distribution<double> dist(0.0, 9000.0);
    for (int i = 0; i < n; ++i) {
        DiaryEntry e;
        e.respondent_id = "r" + std::to_string(rng() % 3);
        e.day = std::to_string(day(rng));
        e.label = rng() % 2 ? "somewhere" : "";
        e.address = rng() % 2 ? "1 High St." : "";
        const int s = start(rng);
        e.start_ms = s * kMsPerMinute;
        e.end_ms = (s + dur(rng)) * kMsPerMinute;
        e.transport = static_cast<Mode>(mode(rng));
        e.distance_m = std::floor(dist(rng));
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace

TEST_CASE("harmonize reproduces the published combined table", "[harmonize]") {
    const HarmonizedDataset ds = harmonize(example_diary_rows(), example_app_rows());
    const std::string expected =
        "respondent_id,day,mode,label,address,trip_start,trip_end,transport_method,distance_m\n"
        "r1,1,Diary,Son's school,203 Main St.,08:35,08:50,Walk,210\n"
        "r1,1,Diary,Home,4 Church Ln.,08:50,09:00,Walk,210\n"
        "r1,2,App,,203 Main St.,08:35,08:43,Walk,210\n"
        "r1,2,App,,4 Church Ln.,08:51,08:53,Walk,210\n";
    CHECK(write_harmonized_csv(ds) == expected);
}

TEST_CASE("harmonize of two empty inputs is empty", "[harmonize]") {
    const HarmonizedDataset ds = harmonize({}, {});
    CHECK(ds.rows.empty());
    CHECK(ds.missing_mask.empty());
}

TEST_CASE("app labels are dropped by default and kept on request", "[harmonize]") {
    const HarmonizedDataset plain = harmonize({}, example_app_rows());
    for (const HarmonizedRow& r : plain.rows) CHECK(r.label.empty());
    HarmonizeOptions opts;
    opts.keep_app_labels = true;
    const HarmonizedDataset kept = harmonize({}, example_app_rows(), opts);
    CHECK(kept.rows[0].label == "Son's school");
}

TEST_CASE("row conservation and mask soundness", "[harmonize][property]") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 100; ++iter) {
        const auto diary = random_entries(rng, static_cast<int>(rng() % 12));
        const auto app = random_entries(rng, static_cast<int>(rng() % 12));
        const HarmonizedDataset ds = harmonize(diary, app);
        REQUIRE(ds.rows.size() == diary.size() + app.size());
        REQUIRE(ds.missing_mask.size() == ds.rows.size());
        for (std::size_t i = 0; i < ds.rows.size(); ++i) {
            CHECK(ds.missing_mask[i].label == ds.rows[i].label.empty());
            CHECK(ds.missing_mask[i].address == ds.rows[i].address.empty());
        }
        for (std::size_t i = 1; i < ds.rows.size(); ++i) {
            const auto key = [](const HarmonizedRow& r) {
                return std::tie(r.respondent_id, r.day, r.start_min);
            };
            CHECK(key(ds.rows[i - 1]) <= key(ds.rows[i]));
        }
    }
}

TEST_CASE("harmonize is idempotent through split_by_source", "[harmonize][property]") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 100; ++iter) {
        const auto diary = random_entries(rng, static_cast<int>(rng() % 10));
        const auto app = random_entries(rng, static_cast<int>(rng() % 10));
        const HarmonizedDataset once = harmonize(diary, app);
        const auto [d2, a2] = split_by_source(once);
        const HarmonizedDataset twice = harmonize(d2, a2);
        CHECK(once == twice);
    }
}

TEST_CASE("source separation recovers each input up to normalization", "[harmonize]") {
    const HarmonizedDataset ds = harmonize(example_diary_rows(), example_app_rows());
    const auto [diary, app] = split_by_source(ds);
    REQUIRE(diary.size() == 2);
    REQUIRE(app.size() == 2);
    CHECK(diary[0].label == "Son's school");
    CHECK(diary[0].start_ms == example_diary_rows()[0].start_ms);
    CHECK(app[0].address == "203 Main St.");
    CHECK(app[0].label.empty());  // label was dropped in the combined table
}

TEST_CASE("harmonize rejects invalid rows naming row and field", "[harmonize]") {
    auto rows = example_diary_rows();
    rows[1].end_ms = rows[1].start_ms;
    try {
        harmonize(rows, {});
        FAIL("expected SchemaViolation");
    } catch (const SchemaViolation& e) {
        CHECK(e.row() == 2);
        CHECK(e.field() == "trip_end");
    }
}

TEST_CASE("mode effect report on the published table", "[harmonize]") {
    const HarmonizedDataset ds = harmonize(example_diary_rows(), example_app_rows());
    const ModeEffectReport rep = mode_effect_report(ds);
    REQUIRE_FALSE(rep.diary.empty);
    REQUIRE_FALSE(rep.app.empty);
    CHECK(rep.diary.trip_count == 2.0);
    CHECK(rep.app.trip_count == 2.0);
    CHECK(rep.diary.mean_distance_m == 210.0);
    CHECK(rep.app.mean_distance_m == 210.0);
    const auto it = std::find(rep.variables.begin(), rep.variables.end(), "mean_distance_m");
    REQUIRE(it != rep.variables.end());
    CHECK(rep.differences[it - rep.variables.begin()] == 0.0);
    // app intervals are tighter than the reported ones
    const auto dur = std::find(rep.variables.begin(), rep.variables.end(), "mean_duration_min");
    CHECK(rep.differences[dur - rep.variables.begin()] < 0.0);
}

TEST_CASE("doubling one source's trips shows up as the count difference", "[harmonize]") {
    auto app = example_app_rows();
    auto more = example_app_rows();
    for (auto& e : more) {
        e.start_ms += 3 * kMsPerHour;
        e.end_ms += 3 * kMsPerHour;
    }
    app.insert(app.end(), more.begin(), more.end());
    const HarmonizedDataset ds = harmonize(example_diary_rows(), app);
    const ModeEffectReport rep = mode_effect_report(ds);
    CHECK(rep.app.trip_count == 4.0);
    CHECK(rep.differences[0] == 2.0);  // trip_count is the first variable
    CHECK(rep.differences[0] == rep.diary.trip_count);
}

TEST_CASE("swapping source tags negates every difference", "[harmonize][property]") {
    std::mt19937_64 rng(55);
    for (int iter = 0; iter < 50; ++iter) {
        const auto diary = random_entries(rng, 1 + static_cast<int>(rng() % 10));
        const auto app = random_entries(rng, 1 + static_cast<int>(rng() % 10));
        const ModeEffectReport fwd = mode_effect_report(harmonize(diary, app));
        const ModeEffectReport rev = mode_effect_report(harmonize(app, diary));
        REQUIRE(fwd.variables.size() == rev.variables.size());
        for (std::size_t i = 0; i < fwd.variables.size(); ++i) {
            CHECK_THAT(fwd.differences[i], Catch::Matchers::WithinAbs(-rev.differences[i], 1e-9));
            CHECK_THAT(fwd.relative_differences[i],
                       Catch::Matchers::WithinAbs(-rev.relative_differences[i], 1e-9));
        }
    }
}

TEST_CASE("report marks an empty source", "[harmonize]") {
    const HarmonizedDataset ds = harmonize(example_diary_rows(), {});
    const ModeEffectReport rep = mode_effect_report(ds);
    CHECK_FALSE(rep.diary.empty);
    CHECK(rep.app.empty);
    CHECK(rep.variables.empty());
    CHECK(format_mode_effect(rep).find("EMPTY") != std::string::npos);
}

TEST_CASE("harmonized csv round trip", "[harmonize]") {
    const HarmonizedDataset ds = harmonize(example_diary_rows(), example_app_rows());
    const std::string dir = cli::scratch_dir("harm_csv");
    cli::write_text(dir + "/h.csv", write_harmonized_csv(ds));
    const HarmonizedDataset back = read_harmonized_csv(dir + "/h.csv");
    CHECK(back == ds);
}
