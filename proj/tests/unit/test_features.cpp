#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "hitcast/errors.hpp"
#include "hitcast/features.hpp"
#include "hitcast/rng.hpp"

using namespace hitcast;

namespace {

// Week Mondays used throughout: 2013-04-15 + 7k.
Date week(int k) { return Date::parse("2013-04-15").plus_days(7 * k); }

Scrobble listen(int week_index, int day, const std::string& user, const std::string& title) {
    return Scrobble{(week(week_index).days() + day) * 86400 + 43200, user,
                    SongKey{"artist", title}};
}

LabelTable labels_for(const std::map<std::string, std::optional<int>>& songs) {
    LabelTable::Map map;
    for (const auto& [title, entry_week] : songs) {
        Label label;
        if (entry_week) {
            label.cls = SongClass::hit;
            label.first_hit_week = week(*entry_week);
        } else {
            label.cls = SongClass::nonhit;
        }
        map[SongKey{"artist", title}] = label;
    }
    return LabelTable(map);
}

ListeningBuildOptions opts(CountMode mode = CountMode::cumulative, int weeks = 12) {
    ListeningBuildOptions o;
    o.window = DateInterval::make(week(0), week(weeks - 1).plus_days(6));
    o.count_mode = mode;
    return o;
}

std::optional<std::size_t> find_row(const Dataset& d, const std::string& title, int week_index) {
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        const auto& inst = d.instances()[i];
        if (inst.song.title == title && inst.week_start == week(week_index)) return i;
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("listening dataset: predictive labels and post-hit handling") {
    // hit song enters the charts at week 10; non-hit listens every week
    const LabelTable labels = labels_for({{"hit song", 10}, {"steady", std::nullopt}});
    std::vector<Scrobble> scrobbles;
    for (int w = 0; w < 12; ++w) {
        scrobbles.push_back(listen(w, 0, "u1", "steady"));
        if (w >= 7) scrobbles.push_back(listen(w, 1, "u2", "hit song"));
    }
    std::sort(scrobbles.begin(), scrobbles.end());

    JoinReport report;
    const Dataset d = build_listening_dataset(scrobbles, labels, opts(), &report);

    // week 8 row of the future hit carries label 1
    const auto hit_w8 = find_row(d, "hit song", 8);
    REQUIRE(hit_w8.has_value());
    CHECK(d.labels()[*hit_w8] == 1);

    // rows at and after the entry week are excluded by default
    CHECK(!find_row(d, "hit song", 10).has_value());
    CHECK(!find_row(d, "hit song", 11).has_value());
    CHECK(report.rows_post_hit_excluded == 2);

    // non-hit rows all carry label 0
    for (int w = 0; w < 12; ++w) {
        const auto row = find_row(d, "steady", w);
        REQUIRE(row.has_value());
        CHECK(d.labels()[*row] == 0);
    }

    // keeping post-hit rows turns them into label 0
    auto with_post = opts();
    with_post.include_post_hit = true;
    const Dataset d2 = build_listening_dataset(scrobbles, labels, with_post);
    const auto post_row = find_row(d2, "hit song", 11);
    REQUIRE(post_row.has_value());
    CHECK(d2.labels()[*post_row] == 0);
}

TEST_CASE("listening dataset: cumulative and weekly cell semantics") {
    const LabelTable labels = labels_for({{"hit song", 10}, {"steady", std::nullopt}});
    // u listens twice in week 3 and once in week 5 to "steady"
    std::vector<Scrobble> scrobbles{
        listen(3, 0, "u", "steady"), listen(3, 2, "u", "steady"), listen(5, 1, "u", "steady"),
        // a couple of hit-song listens so both classes exist
        listen(8, 0, "v", "hit song"), listen(9, 0, "v", "hit song")};
    std::sort(scrobbles.begin(), scrobbles.end());

    const Dataset cumulative = build_listening_dataset(scrobbles, labels, opts());
    const std::size_t u_col = 0;  // users sorted lexicographically: u before v
    REQUIRE(cumulative.feature_names()[u_col] == "u");
    CHECK(cumulative.cell(*find_row(cumulative, "steady", 3), u_col) == 2.0);
    CHECK(cumulative.cell(*find_row(cumulative, "steady", 4), u_col) == 2.0);
    CHECK(cumulative.cell(*find_row(cumulative, "steady", 5), u_col) == 3.0);
    CHECK(cumulative.cell(*find_row(cumulative, "steady", 11), u_col) == 3.0);
    // first instance week is the first scrobble's week, not the window start
    CHECK(!find_row(cumulative, "steady", 2).has_value());

    const Dataset weekly = build_listening_dataset(scrobbles, labels, opts(CountMode::weekly));
    CHECK(weekly.cell(*find_row(weekly, "steady", 3), u_col) == 2.0);
    CHECK(weekly.cell(*find_row(weekly, "steady", 5), u_col) == 1.0);
    // weekly mode has no row for silent weeks
    CHECK(!find_row(weekly, "steady", 4).has_value());

    // cumulative monotonicity per (song, user)
    for (const char* title : {"steady", "hit song"}) {
        double prev = -1.0;
        for (int w = 0; w < 12; ++w) {
            const auto row = find_row(cumulative, title, w);
            if (!row) continue;
            const double v = cumulative.cell(*row, u_col);
            CHECK(v >= prev);
            prev = v;
        }
    }

    // column conservation: weekly cells for (song, user) sum to total listens
    double weekly_sum = 0.0;
    for (std::size_t i = 0; i < weekly.n_rows(); ++i)
        if (weekly.instances()[i].song.title == "steady") weekly_sum += weekly.cell(i, u_col);
    CHECK(weekly_sum == 3.0);
}

TEST_CASE("listening dataset: join accounting and fatal cases") {
    const LabelTable labels = labels_for({{"hit song", 10}, {"steady", std::nullopt}});
    std::vector<Scrobble> scrobbles{listen(2, 0, "u", "steady"), listen(8, 0, "u", "hit song"),
                                    listen(3, 0, "u", "unlabeled song")};
    std::sort(scrobbles.begin(), scrobbles.end());

    JoinReport report;
    const Dataset d = build_listening_dataset(scrobbles, labels, opts(), &report);
    CHECK(report.songs_seen == 3);
    CHECK(report.songs_kept == 2);
    CHECK(report.songs_dropped == 1);
    CHECK(report.records_seen == 3);
    CHECK(report.records_kept + report.records_dropped == report.records_seen);
    CHECK(report.positives + report.negatives == d.n_rows());

    // no overlap at all
    const LabelTable other = labels_for({{"different", std::nullopt}, {"another", 3}});
    CHECK_THROWS_AS(build_listening_dataset(scrobbles, other, opts()), DataError);

    // single class: only the non-hit song appears
    const std::vector<Scrobble> only_nonhit{listen(2, 0, "u", "steady")};
    CHECK_THROWS_WITH_AS(build_listening_dataset(only_nonhit, labels, opts()),
                         doctest::Contains("hit"), DataError);

    // scrobbles outside the window violate the cleaned-input precondition
    const std::vector<Scrobble> outside{listen(-1, 0, "u", "steady"),
                                        listen(2, 0, "u", "hit song")};
    CHECK_THROWS_AS(build_listening_dataset(outside, labels, opts()), DataError);
}

namespace {

const char* kAudioHeader = "artist,title,tempo,energy,danceability,hotness\n";

Dataset build_audio(const std::string& csv, const LabelTable& labels, AudioBuildOptions opt = {},
                    JoinReport* report = nullptr) {
    std::istringstream in(csv);
    return build_audio_dataset(in, labels, opt, report);
}

} // namespace

TEST_CASE("audio dataset: meta keeps all columns, audio drops the meta set") {
    const LabelTable labels = labels_for({{"hit song", 10}, {"steady", std::nullopt}});
    const std::string csv = std::string(kAudioHeader) +
                            "artist,hit song,120,0.8,0.9,0.7\n"
                            "artist,steady,95,0.4,0.2,\n"
                            "artist,unknown,100,0.5,0.5,0.5\n";

    JoinReport report;
    const Dataset meta = build_audio(csv, labels, {}, &report);
    CHECK(meta.feature_names() ==
          std::vector<std::string>{"tempo", "energy", "danceability", "hotness"});
    CHECK(meta.n_rows() == 2);
    CHECK(meta.missing_count() == 1);  // empty hotness cell
    CHECK(report.records_dropped == 1);
    CHECK(report.songs_seen == 3);
    CHECK(report.songs_kept == 2);

    AudioBuildOptions audio_opt;
    audio_opt.feature_set = AudioBuildOptions::FeatureSet::audio;
    audio_opt.meta_feature_names = {"danceability", "hotness"};
    const Dataset audio = build_audio(csv, labels, audio_opt);
    CHECK(audio.feature_names() == std::vector<std::string>{"tempo", "energy"});
    CHECK(audio.missing_count() == 0);

    // labels come from the table
    for (std::size_t i = 0; i < audio.n_rows(); ++i) {
        const bool is_hit = audio.instances()[i].song.title == "hit song";
        CHECK(audio.labels()[i] == (is_hit ? 1 : 0));
    }
}

TEST_CASE("audio dataset: fatal configurations") {
    const LabelTable labels = labels_for({{"hit song", 10}, {"steady", std::nullopt}});
    const std::string csv =
        std::string(kAudioHeader) + "artist,hit song,1,2,3,4\nartist,steady,5,6,7,8\n";

    AudioBuildOptions no_meta;
    no_meta.feature_set = AudioBuildOptions::FeatureSet::audio;
    CHECK_THROWS_AS(build_audio(csv, labels, no_meta), DataError);

    AudioBuildOptions unknown_meta;
    unknown_meta.feature_set = AudioBuildOptions::FeatureSet::audio;
    unknown_meta.meta_feature_names = {"no_such_column"};
    CHECK_THROWS_AS(build_audio(csv, labels, unknown_meta), DataError);

    const LabelTable disjoint = labels_for({{"different", 3}, {"other", std::nullopt}});
    CHECK_THROWS_AS(build_audio(csv, disjoint, {}), DataError);

    std::istringstream bad_header("artist,name,f\n");
    ParseReport report;
    CHECK_THROWS_AS(build_audio_dataset(bad_header, labels, {}, nullptr, &report), DataError);
}

TEST_CASE("listening dataset labels match a brute-force rescan") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        // random labels over 8 songs, random scrobbles over 10 weeks
        std::map<std::string, std::optional<int>> songs;
        for (int s = 0; s < 8; ++s) {
            const std::string title = "song " + std::to_string(s);
            if (rng.below(2))
                songs[title] = static_cast<int>(rng.below(10));
            else
                songs[title] = std::nullopt;
        }
        const LabelTable labels = labels_for(songs);
        std::vector<Scrobble> scrobbles;
        const auto n = 30 + rng.below(40);
        for (std::uint64_t i = 0; i < n; ++i)
            scrobbles.push_back(listen(static_cast<int>(rng.below(10)),
                                       static_cast<int>(rng.below(7)),
                                       "u" + std::to_string(rng.below(5)),
                                       "song " + std::to_string(rng.below(8))));
        std::sort(scrobbles.begin(), scrobbles.end());
        scrobbles.erase(std::unique(scrobbles.begin(), scrobbles.end()), scrobbles.end());

        ListeningBuildOptions o = opts(CountMode::cumulative, 10);
        o.include_post_hit = rng.below(2) == 0;
        Dataset d;
        try {
            d = build_listening_dataset(scrobbles, labels, o);
        } catch (const DataError&) {
            continue;  // single-class draw
        }
        for (std::size_t i = 0; i < d.n_rows(); ++i) {
            const auto& inst = d.instances()[i];
            const Label* label = labels.find(inst.song);
            REQUIRE(label != nullptr);
            const bool expect = label->cls == SongClass::hit &&
                                *inst.week_start < *label->first_hit_week;
            CHECK(d.labels()[i] == (expect ? 1 : 0));
        }
    }
}
