#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "../support/oracles.hpp"
#include "hitcast/charts.hpp"
#include "hitcast/errors.hpp"
#include "hitcast/rng.hpp"

using namespace hitcast;

namespace {

std::vector<ChartEntry> parse(const std::string& csv, ChartParseOptions opt = {},
                              ParseReport* out_report = nullptr) {
    std::istringstream in(csv);
    ParseReport report;
    auto entries = parse_chart_csv(in, opt, report);
    if (out_report) *out_report = report;
    return entries;
}

const char* kHeader = "week_start,chart,position,artist,title\n";

} // namespace

TEST_CASE("parse_chart_csv maps fields and normalizes keys") {
    ParseReport report;
    const auto entries = parse(std::string(kHeader) +
                                   "2013-07-01,main,15,DJ One,Hit Song\n"
                                   "2013-07-01,bubbling,3,New Act,Riser\n",
                               {}, &report);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].week_start == Date::parse("2013-07-01"));
    CHECK(entries[0].kind == ChartKind::main);
    CHECK(entries[0].position == 15);
    CHECK(entries[0].song == SongKey{"dj one", "hit song"});
    CHECK(entries[1].kind == ChartKind::bubbling);
    CHECK(entries[1].position == 3);
    CHECK(report.rows_ok == 2);
}

TEST_CASE("parse_chart_csv rejects with line numbers") {
    ParseReport report;
    ChartParseOptions opt;
    opt.max_reject_fraction = 1.0;
    const auto entries = parse(std::string(kHeader) +
                                   "2013-07-01,main,zero,X,Y\n"
                                   "2013-07-01,main,51,X,Y\n"
                                   "2013-07-01,bubbling,21,X,Y\n"
                                   "bad-date,main,1,X,Y\n"
                                   "2013-07-01,midweek,1,X,Y\n"
                                   "2013-07-01,main,1,!!!,Y\n"
                                   "2013-07-01,main,2,Real Artist,Real Song\n",
                               opt, &report);
    CHECK(entries.size() == 1);
    CHECK(report.rows_rejected == 6);
    REQUIRE(report.rejects.size() == 6);
    CHECK(report.rejects[0].line == 2);
    CHECK(report.rejects[0].reason.find("position") != std::string::npos);
    std::ostringstream rejects_csv;
    report.write_rejects_csv(rejects_csv);
    CHECK(rejects_csv.str().rfind("line,reason\n", 0) == 0);
}

TEST_CASE("parse_chart_csv fatal errors") {
    CHECK_THROWS_AS(parse("wrong,header\n1,2\n"), DataError);
    CHECK_THROWS_AS(parse(""), DataError);
    // default ceiling is 10% rejects
    std::string csv(kHeader);
    for (int i = 0; i < 8; ++i) csv += "2013-07-01,main,1,A,B\n";
    csv += "bad,main,1,A,B\nbad,main,1,A,B\n";
    CHECK_THROWS_AS(parse(csv), DataError);
}

TEST_CASE("parse_chart_csv window filtering and monday flooring") {
    ChartParseOptions opt;
    opt.window = DateInterval::parse("2013-07-01..2013-07-31");
    ParseReport report;
    const auto entries = parse(std::string(kHeader) +
                                   "2013-07-03,main,1,A,B\n"    // Wednesday -> floored
                                   "2013-06-30,main,1,A,B\n",   // floors to 2013-06-24, outside
                               opt, &report);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].week_start == Date::parse("2013-07-01"));
    CHECK(report.rows_out_of_window == 1);
}

TEST_CASE("build_label_table spec examples") {
    const auto entries = parse(std::string(kHeader) +
                               "2013-07-01,main,15,DJ One,Hit Song\n"
                               "2013-06-03,bubbling,5,Quiet Act,Sleeper\n"
                               "2013-06-03,bubbling,6,Rising Act,Climber\n"
                               "2013-07-15,main,10,Rising Act,Climber\n"
                               "2013-07-01,main,30,Edge Act,Outside Top\n");
    LabelSummary summary;
    const auto table = build_label_table(entries, 20, &summary);

    const auto* hit = table.find(SongKey{"dj one", "hit song"});
    REQUIRE(hit != nullptr);
    CHECK(hit->cls == SongClass::hit);
    CHECK(hit->first_hit_week == Date::parse("2013-07-01"));

    const auto* nonhit = table.find(SongKey{"quiet act", "sleeper"});
    REQUIRE(nonhit != nullptr);
    CHECK(nonhit->cls == SongClass::nonhit);
    CHECK(!nonhit->first_hit_week.has_value());

    // bubbling first, then main top 20 later: removed from the non-hit pool
    const auto* climber = table.find(SongKey{"rising act", "climber"});
    REQUIRE(climber != nullptr);
    CHECK(climber->cls == SongClass::hit);
    CHECK(climber->first_hit_week == Date::parse("2013-07-15"));

    // main chart only, above top_n: excluded entirely
    CHECK(table.find(SongKey{"edge act", "outside top"}) == nullptr);
    CHECK(summary.excluded == 1);
    CHECK(summary.hits == 2);
    CHECK(summary.nonhits == 1);
    CHECK(summary.unique_songs == 4);
    CHECK(summary.entries == 5);
}

TEST_CASE("build_label_table preconditions") {
    CHECK_THROWS_AS(build_label_table({}, 20), DataError);
    const auto entries = parse(std::string(kHeader) + "2013-07-01,main,1,A,B\n");
    CHECK_THROWS_AS(build_label_table(entries, 0), UsageError);
}

namespace {

std::vector<ChartEntry> random_entries(Rng& rng, int n_songs, int n_weeks, int n_entries) {
    std::vector<ChartEntry> entries;
    const Date base = Date::parse("2013-01-07");
    for (int i = 0; i < n_entries; ++i) {
        ChartEntry e;
        e.week_start = base.plus_days(7 * static_cast<std::int64_t>(rng.below(n_weeks)));
        e.kind = rng.below(2) ? ChartKind::main : ChartKind::bubbling;
        e.position = static_cast<int>(1 + rng.below(e.kind == ChartKind::main ? 50 : 20));
        e.song = SongKey{"artist " + std::to_string(rng.below(n_songs)), "song"};
        entries.push_back(e);
    }
    return entries;
}

} // namespace

TEST_CASE("build_label_table properties against the brute-force oracle") {
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        const auto entries = random_entries(rng, 12, 10, 60);
        const int top_n = static_cast<int>(1 + rng.below(25));
        const auto table = build_label_table(entries, top_n);
        const auto oracle = testsupport::brute_force_labels(entries, top_n);

        REQUIRE(table.size() == oracle.size());
        for (const auto& [song, label] : table.songs()) {
            const auto it = oracle.find(song);
            REQUIRE(it != oracle.end());
            CHECK((label.cls == SongClass::hit) == it->second.hit);
            CHECK(label.first_hit_week == it->second.first_hit_week);
        }

        // partition: no key is both hit and nonhit by construction of the map;
        // monotonicity: every hit under top_n stays a hit under top_n + 1
        const auto wider = build_label_table(entries, top_n + 1);
        for (const auto& [song, label] : table.songs()) {
            if (label.cls != SongClass::hit) continue;
            const auto* w = wider.find(song);
            REQUIRE(w != nullptr);
            CHECK(w->cls == SongClass::hit);
            CHECK(*w->first_hit_week <= *label.first_hit_week);
        }

        // order independence
        auto shuffled = entries;
        rng.shuffle(shuffled);
        const auto reshuffled_table = build_label_table(shuffled, top_n);
        CHECK(reshuffled_table.to_json() == table.to_json());
    }
}

TEST_CASE("label table json round trip") {
    const auto entries = parse(std::string(kHeader) +
                               "2013-07-01,main,3,DJ One,Hit Song\n"
                               "2013-07-01,bubbling,4,Quiet Act,Sleeper\n");
    const auto table = build_label_table(entries, 20);
    const auto round = LabelTable::from_json(table.to_json());
    CHECK(round.to_json() == table.to_json());
    CHECK(round.hit_count() == 1);
    CHECK(round.nonhit_count() == 1);
}
