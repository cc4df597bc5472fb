#include <doctest.h>

#include <sstream>

#include "hitcast/csv.hpp"
#include "hitcast/dates.hpp"
#include "hitcast/errors.hpp"

using namespace hitcast;

TEST_CASE("csv reader handles quoting and blank lines") {
    std::istringstream in("a,b,c\n\n\"x,y\",\"he said \"\"hi\"\"\",plain\r\n");
    CsvReader reader(in);
    auto header = reader.next();
    REQUIRE(header.has_value());
    CHECK(*header == std::vector<std::string>{"a", "b", "c"});
    auto row = reader.next();
    REQUIRE(row.has_value());
    CHECK(*row == std::vector<std::string>{"x,y", "he said \"hi\"", "plain"});
    CHECK(reader.record_line() == 3);
    CHECK(!reader.next().has_value());
}

TEST_CASE("csv reader skips a UTF-8 BOM") {
    std::istringstream in("\xEF\xBB\xBFh1,h2\n1,2\n");
    CsvReader reader(in);
    CHECK(*reader.next() == std::vector<std::string>{"h1", "h2"});
}

TEST_CASE("csv quoting round trips") {
    const std::vector<std::string> fields{"plain", "with,comma", "with\"quote", "with\nnewline"};
    std::istringstream in(csv_join(fields) + "\n");
    CsvReader reader(in);
    CHECK(*reader.next() == fields);
}

TEST_CASE("dates parse, format and weekday math") {
    const Date d = Date::parse("2013-07-01");
    CHECK(d.iso() == "2013-07-01");
    CHECK(d.is_monday());
    CHECK(Date::parse("2013-07-04").monday() == d);  // Thursday -> Monday
    CHECK(Date::parse("2013-07-07").monday() == d);  // Sunday -> same week
    CHECK(Date::parse("2013-07-08").monday() == Date::parse("2013-07-08"));
    CHECK(Date::parse("2016-02-29").iso() == "2016-02-29");
    CHECK(!Date::try_parse("2015-02-29").has_value());
    CHECK(!Date::try_parse("2013-13-01").has_value());
    CHECK(!Date::try_parse("2013-1-01").has_value());
    CHECK_THROWS_AS(Date::parse("garbage"), DataError);
}

TEST_CASE("timestamps parse offsets and format back to Z") {
    const std::int64_t ts = parse_timestamp("2013-05-02T20:15:00Z");
    CHECK(format_timestamp(ts) == "2013-05-02T20:15:00Z");
    CHECK(parse_timestamp("2013-05-02T22:15:00+02:00") == ts);
    CHECK(parse_timestamp("2013-05-02T22:15:00+0200") == ts);
    CHECK(parse_timestamp("2013-05-02T18:15:00-02") == ts);
    CHECK(parse_timestamp("2013-05-02T20:15:00.750Z") == ts);  // fraction truncates
    CHECK(!try_parse_timestamp("2013-05-02T20:15:00").has_value());  // offset required
    CHECK(!try_parse_timestamp("not-a-date").has_value());
    CHECK(!try_parse_timestamp("2013-05-02T25:00:00Z").has_value());
    CHECK(date_of_timestamp(ts).iso() == "2013-05-02");
}

TEST_CASE("date intervals") {
    const auto w = DateInterval::parse("2013-04-16..2013-11-16");
    CHECK(w.contains(Date::parse("2013-04-16")));
    CHECK(w.contains(Date::parse("2013-11-16")));
    CHECK(!w.contains(Date::parse("2013-11-17")));
    CHECK(w.contains_ts(parse_timestamp("2013-11-16T23:59:59Z")));
    CHECK(!w.contains_ts(parse_timestamp("2013-11-17T00:00:00Z")));
    CHECK(!w.contains_ts(parse_timestamp("2013-04-15T23:59:59Z")));
    CHECK_THROWS_AS(DateInterval::parse("2013-04-16"), DataError);
    CHECK_THROWS_AS(DateInterval::parse("2014-01-01..2013-01-01"), DataError);
}

TEST_CASE("float formatting is locale free and round trips") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-3.0) == "-3");
    CHECK(format_double_fixed(0.123456, 4) == "0.1235");
    CHECK(format_double_fixed(1.0, 1) == "1.0");
}
