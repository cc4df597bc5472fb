#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "hitcast/errors.hpp"
#include "hitcast/scrobbles.hpp"

using namespace hitcast;

namespace {

const char* kHeader = "timestamp,user,artist,title\n";

std::vector<Scrobble> parse(const std::string& csv, ParseReport* out_report = nullptr) {
    std::istringstream in(csv);
    ScrobbleParseOptions opt;
    opt.max_reject_fraction = 1.0;
    ParseReport report;
    auto out = parse_scrobbles(in, opt, report);
    if (out_report) *out_report = report;
    return out;
}

} // namespace

TEST_CASE("parse_scrobbles maps fields") {
    ParseReport report;
    const auto scrobbles =
        parse(std::string(kHeader) + "2013-05-02T20:15:00Z,u42,DJ One,Hit Song\n", &report);
    REQUIRE(scrobbles.size() == 1);
    CHECK(scrobbles[0].timestamp == parse_timestamp("2013-05-02T20:15:00Z"));
    CHECK(scrobbles[0].user == "u42");
    CHECK(scrobbles[0].song == SongKey{"dj one", "hit song"});
    CHECK(report.rows_ok == 1);
}

TEST_CASE("parse_scrobbles per-row errors") {
    ParseReport report;
    const auto scrobbles = parse(std::string(kHeader) +
                                     "2013-05-02T20:15:00Z,,X,Y\n"
                                     "not-a-date,u1,X,Y\n"
                                     "2013-05-02T20:15:00Z,u1,X,Y\n",
                                 &report);
    CHECK(scrobbles.size() == 1);
    CHECK(report.rows_rejected == 2);
    CHECK(report.rejects[0].reason == "empty user");
    CHECK(report.rejects[1].reason.find("timestamp") != std::string::npos);
}

TEST_CASE("parse_scrobbles fatal on bad header") {
    std::istringstream in("time,user,artist,title\n");
    ScrobbleParseOptions opt;
    ParseReport report;
    CHECK_THROWS_AS(parse_scrobbles(in, opt, report), DataError);
}

TEST_CASE("clean_scrobbles dedupe, window and ordering") {
    const DateInterval window = DateInterval::parse("2013-04-16..2013-11-16");
    const auto raw = parse(std::string(kHeader) +
                           "2013-05-02T20:15:00Z,u1,A,B\n"
                           "2013-05-02T20:15:00Z,u1,A,B\n"    // exact duplicate
                           "2013-05-02T20:15:01Z,u1,A,B\n"    // 1 second apart: retained
                           "2013-04-15T10:00:00Z,u1,A,B\n"    // before the window
                           "2013-05-02T20:15:00Z,u0,A,B\n");
    CleaningSummary summary;
    const auto cleaned = clean_scrobbles(raw, window, summary);

    CHECK(summary.input == 5);
    CHECK(summary.retained == 3);
    CHECK(summary.dropped_out_of_window == 1);
    CHECK(summary.dropped_duplicate == 1);
    CHECK(summary.input == summary.retained + summary.dropped_out_of_window +
                               summary.dropped_duplicate);

    REQUIRE(cleaned.size() == 3);
    CHECK(std::is_sorted(cleaned.begin(), cleaned.end()));
    CHECK(cleaned[0].user == "u0");  // same timestamp sorts by user

    // idempotence
    CleaningSummary again;
    const auto twice = clean_scrobbles(cleaned, window, again);
    CHECK(twice == cleaned);
    CHECK(again.dropped_duplicate == 0);
    CHECK(again.dropped_out_of_window == 0);

    const auto json = summary.to_json();
    CHECK(json.at("dropped_by_reason").at("out_of_window") == 1);
}

TEST_CASE("cleaned scrobbles reparse with zero rejects") {
    const DateInterval window = DateInterval::parse("2013-04-16..2013-11-16");
    const auto raw = parse(std::string(kHeader) +
                           "2013-05-02T22:15:00+02:00,u1,The Artist FT. Guest,Tune (Club Mix)\n"
                           "2013-06-01T08:00:00Z,u2,Rock & Roll,Song\n");
    CleaningSummary summary;
    const auto cleaned = clean_scrobbles(raw, window, summary);

    std::ostringstream out;
    write_scrobbles_csv(out, cleaned);
    ParseReport report;
    const auto reparsed = parse(out.str(), &report);
    CHECK(report.rows_rejected == 0);
    CHECK(reparsed == cleaned);
}
